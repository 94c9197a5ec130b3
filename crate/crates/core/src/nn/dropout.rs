//! Inverted dropout: zero with probability `rate` during training,
//! survivors scaled by 1/(1-rate); identity at evaluation.

use ndarray::Array1;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Train,
    Eval,
}

/// Applies dropout to a vector. Returns the output and, in train mode, the
/// mask with the 1/(1-rate) scale folded in (so backward is an elementwise
/// product with the same mask).
pub fn dropout(
    x: &Array1<f64>,
    rate: f64,
    phase: Phase,
    rng: &mut ChaCha8Rng,
) -> Result<(Array1<f64>, Option<Array1<f64>>)> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::InvalidDropoutRate(rate));
    }
    match phase {
        Phase::Eval => Ok((x.clone(), None)),
        Phase::Train => {
            let keep_scale = 1.0 / (1.0 - rate);
            let mask = Array1::from_iter(
                (0..x.len()).map(|_| if rng.random::<f64>() < rate { 0.0 } else { keep_scale }),
            );
            Ok((x * &mask, Some(mask)))
        }
    }
}
