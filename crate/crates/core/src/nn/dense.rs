//! Final dense layer with a sigmoid output.

use ndarray::Array1;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseParams {
    pub w: Array1<f64>,
    pub b: f64,
}

impl DenseParams {
    pub fn zeros(input_dim: usize) -> Self {
        Self {
            w: Array1::zeros(input_dim),
            b: 0.0,
        }
    }

    pub fn init(input_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let bound = (6.0 / (input_dim + 1) as f64).sqrt();
        let mut p = Self::zeros(input_dim);
        for v in p.w.iter_mut() {
            *v = rng.random_range(-bound..bound);
        }
        p
    }

    pub fn input_dim(&self) -> usize {
        self.w.len()
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// p = sigma(w . x + b), returned with the pre-activation logit.
pub fn dense_sigmoid_forward(x: &Array1<f64>, p: &DenseParams) -> Result<(f64, f64)> {
    if x.len() != p.input_dim() {
        return Err(Error::ShapeMismatch(format!(
            "dense layer expects input {}, got {}",
            p.input_dim(),
            x.len()
        )));
    }
    let z = p.w.dot(x) + p.b;
    Ok((z, sigmoid(z)))
}

/// Accumulates dense gradients for logit gradient `dz`; returns `dx`.
pub(crate) fn dense_backward(
    x: &Array1<f64>,
    p: &DenseParams,
    dz: f64,
    grads: &mut DenseParams,
) -> Array1<f64> {
    grads.w.scaled_add(dz, x);
    grads.b += dz;
    p.w.mapv(|w| w * dz)
}
