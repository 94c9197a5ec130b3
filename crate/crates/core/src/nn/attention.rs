//! Additive attention pooling over a state sequence.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::init::glorot_uniform;

/// Attention parameters: projection `W` (attn_dim x state_dim) and the
/// scoring vector `v` (attn_dim).
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionParams {
    pub w: Array2<f64>,
    pub v: Array1<f64>,
}

impl AttentionParams {
    pub fn zeros(attn_dim: usize, state_dim: usize) -> Self {
        Self {
            w: Array2::zeros((attn_dim, state_dim)),
            v: Array1::zeros(attn_dim),
        }
    }

    pub fn init(attn_dim: usize, state_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut p = Self::zeros(attn_dim, state_dim);
        glorot_uniform(&mut p.w, rng);
        let bound = (3.0 / attn_dim as f64).sqrt();
        for v in p.v.iter_mut() {
            *v = rng.random_range(-bound..bound);
        }
        p
    }

    pub fn attn_dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn state_dim(&self) -> usize {
        self.w.ncols()
    }
}

/// Forward-pass record: projected states `tanh(W s_t)` per valid position,
/// the softmax weights (exactly 0 at padding positions), and the context
/// vector.
#[derive(Debug, Clone)]
pub struct AttentionTrace {
    pub projected: Vec<Array1<f64>>,
    /// One weight per input state; positions >= valid_len hold exactly 0.
    pub weights: Vec<f64>,
    pub context: Array1<f64>,
}

/// score_t = v . tanh(W s_t) over valid positions, softmax-normalized with
/// max-subtraction; context = sum_t alpha_t s_t.
pub fn attention_forward(
    states: &[Array1<f64>],
    valid_len: usize,
    p: &AttentionParams,
) -> Result<AttentionTrace> {
    if valid_len == 0 {
        return Err(Error::EmptySequence);
    }
    if valid_len > states.len() {
        return Err(Error::ShapeMismatch(format!(
            "valid_len {} exceeds {} states",
            valid_len,
            states.len()
        )));
    }
    let mut projected = Vec::with_capacity(valid_len);
    let mut scores = Vec::with_capacity(valid_len);
    for s in &states[..valid_len] {
        if s.len() != p.state_dim() {
            return Err(Error::ShapeMismatch(format!(
                "attention expects state dim {}, got {}",
                p.state_dim(),
                s.len()
            )));
        }
        let a = p.w.dot(s).mapv(f64::tanh);
        scores.push(p.v.dot(&a));
        projected.push(a);
    }

    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|&e| (e - max).exp()).collect();
    let total: f64 = exp.iter().sum();

    let mut weights = vec![0.0; states.len()];
    let mut context = Array1::zeros(p.state_dim());
    for (t, &e) in exp.iter().enumerate() {
        let alpha = e / total;
        weights[t] = alpha;
        context.scaled_add(alpha, &states[t]);
    }
    Ok(AttentionTrace {
        projected,
        weights,
        context,
    })
}

/// Backward pass given the gradient on the context vector. Parameter
/// gradients accumulate into `grads`; returns the gradient per state
/// (zero at padding positions).
pub(crate) fn attention_backward(
    states: &[Array1<f64>],
    valid_len: usize,
    p: &AttentionParams,
    trace: &AttentionTrace,
    dctx: &Array1<f64>,
    grads: &mut AttentionParams,
) -> Vec<Array1<f64>> {
    let mut dstates: Vec<Array1<f64>> = states.iter().map(|s| Array1::zeros(s.len())).collect();

    // d_alpha_t = dctx . s_t ; ds_t += alpha_t dctx
    let mut d_alpha = vec![0.0; valid_len];
    for t in 0..valid_len {
        d_alpha[t] = dctx.dot(&states[t]);
        dstates[t].scaled_add(trace.weights[t], dctx);
    }

    // softmax backward: de_t = alpha_t (d_alpha_t - sum_k alpha_k d_alpha_k)
    let mixed: f64 = (0..valid_len).map(|k| trace.weights[k] * d_alpha[k]).sum();
    for t in 0..valid_len {
        let de = trace.weights[t] * (d_alpha[t] - mixed);
        if de == 0.0 {
            continue;
        }
        let a = &trace.projected[t];
        grads.v.scaled_add(de, a);
        // du = de * v * (1 - a^2)
        let du = a.mapv(|av| 1.0 - av * av) * &p.v * de;
        for (r, &scale) in du.iter().enumerate() {
            if scale != 0.0 {
                grads.w.row_mut(r).scaled_add(scale, &states[t]);
            }
        }
        // ds_t += W^T du
        for (r, &scale) in du.iter().enumerate() {
            if scale != 0.0 {
                dstates[t].scaled_add(scale, &p.w.row(r));
            }
        }
    }
    dstates
}
