//! Mini-batch training loop: shuffled batches, averaged gradients, Adam
//! updates, per-epoch loss history.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embeddings::{EncodedSeq, PAD_INDEX};
use crate::error::{Error, Result};

use super::adam::{AdamConfig, AdamState};
use super::loss::bce_loss;
use super::model::{Gradients, ModelParams};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub adam: AdamConfig,
    /// Stop after the first epoch whose mean loss drops below this value.
    pub early_stop_loss: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch_size: 32,
            epochs: 30,
            seed: 42,
            adam: AdamConfig::default(),
            early_stop_loss: None,
        }
    }
}

/// Trains `params` in place. Returns the per-epoch mean training loss.
/// Deterministic given (params, data order, config). Dropout is active
/// only here; evaluation paths never drop activations.
pub fn fit(
    params: &mut ModelParams,
    data: &[(EncodedSeq, u8)],
    cfg: &TrainConfig,
) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if cfg.batch_size == 0 {
        return Err(Error::InvalidParameter("batch_size must be positive".into()));
    }
    for (seq, _) in data {
        if seq.valid == 0 {
            return Err(Error::EmptySequence);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut grads = Gradients::zeros_like(params);
    let mut flat = params.flatten();
    let mut adam = AdamState::new(flat.len());
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for (batch_no, batch) in order.chunks(cfg.batch_size).enumerate() {
            grads.reset();
            let mut batch_loss = 0.0;
            for &idx in batch {
                let (seq, y) = &data[idx];
                let trace = params.forward_train(seq, &mut rng)?;
                batch_loss += bce_loss(trace.probability, *y);
                params.accumulate_gradients(&trace, *y, &mut grads)?;
            }
            if !batch_loss.is_finite() {
                return Err(Error::NonFiniteLoss {
                    epoch,
                    batch: batch_no,
                });
            }
            epoch_loss += batch_loss;
            grads.scale(1.0 / batch.len() as f64);

            flat.clear();
            flat.extend(params.flatten());
            let grad_flat = grads.flatten();
            adam.step(&mut flat, &grad_flat, &cfg.adam);
            params.assign_from_flat(&flat);
        }
        let mean = epoch_loss / data.len() as f64;
        if !mean.is_finite() {
            return Err(Error::NonFiniteLoss { epoch, batch: 0 });
        }
        history.push(mean);
        if cfg.early_stop_loss.is_some_and(|th| mean < th) {
            break;
        }
    }
    debug_assert!(
        params.embedding.rows.row(PAD_INDEX).iter().all(|&v| v == 0.0),
        "padding row must stay zero"
    );
    Ok(history)
}

/// Eval-mode probability and hard label for one sequence.
pub fn predict(params: &ModelParams, seq: &EncodedSeq) -> Result<(f64, u8)> {
    params.predict(seq)
}
