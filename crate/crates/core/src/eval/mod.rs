//! Metrics, experiment orchestration across the model ladder, and report
//! emission.

use crate::error::{Error, Result};

mod config;
mod experiment;
mod report;

pub use config::{ConfigFile, ExperimentConfig, ModelVersion};
pub use experiment::{run_experiment, run_ladder, EmbeddingTables, ExperimentResult, SeedRow};
pub use report::{Aggregate, ExperimentOutcome, MetricsReport};

/// Binary confusion counts; positive class = 1 (sexist).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

/// Confusion counts from aligned prediction / gold label lists.
pub fn confusion(preds: &[u8], golds: &[u8]) -> Result<ConfusionCounts> {
    if preds.len() != golds.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} predictions vs {} gold labels",
            preds.len(),
            golds.len()
        )));
    }
    let mut c = ConfusionCounts::default();
    for (&p, &g) in preds.iter().zip(golds) {
        match (p, g) {
            (1, 1) => c.true_pos += 1,
            (1, 0) => c.false_pos += 1,
            (0, 1) => c.false_neg += 1,
            (0, 0) => c.true_neg += 1,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "labels must be 0 or 1, got prediction {p} / gold {g}"
                )))
            }
        }
    }
    Ok(c)
}

/// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R).
/// A zero denominator maps the metric to 0.
pub fn precision_recall_f1(c: &ConfusionCounts) -> (f64, f64, f64) {
    let ratio = |num: usize, denom: usize| if denom == 0 { 0.0 } else { num as f64 / denom as f64 };
    let precision = ratio(c.true_pos, c.true_pos + c.false_pos);
    let recall = ratio(c.true_pos, c.true_pos + c.false_neg);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (precision, recall, f1)
}
