//! Non-deep baselines: mean-embedding features with logistic regression
//! and gradient-boosted regression trees on logistic loss.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::embeddings::{EmbeddingMatrix, Vocabulary, PAD_INDEX};
use crate::error::{Error, Result};
use crate::nn::bce_loss;

mod tree;

pub use tree::{RegressionTree, TreeNode};

/// Arithmetic mean of the embedding rows of a statement's tokens.
/// OOV tokens contribute their rows; the padding row never participates.
/// An empty token list maps to the zero vector.
pub fn mean_embedding(
    tokens: &[String],
    vocab: &Vocabulary,
    matrix: &EmbeddingMatrix,
) -> Array1<f64> {
    let mut sum = Array1::zeros(matrix.dim());
    let mut count = 0usize;
    for token in tokens {
        let idx = vocab.index(token);
        if idx == PAD_INDEX {
            continue;
        }
        sum += &matrix.row(idx);
        count += 1;
    }
    if count > 0 {
        sum /= count as f64;
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 500,
            l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: Array1<f64>,
    pub bias: f64,
}

impl LogRegModel {
    pub fn predict_proba(&self, x: &Array1<f64>) -> f64 {
        sigmoid(self.weights.dot(x) + self.bias)
    }
}

#[derive(Debug, Clone)]
pub struct LogRegFit {
    pub model: LogRegModel,
    /// Regularized mean loss after each epoch's update.
    pub loss_history: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn logreg_loss(model: &LogRegModel, features: &[Array1<f64>], labels: &[u8], l2: f64) -> f64 {
    let n = features.len() as f64;
    let data_loss: f64 = features
        .iter()
        .zip(labels)
        .map(|(x, &y)| bce_loss(model.predict_proba(x), y))
        .sum::<f64>()
        / n;
    data_loss + 0.5 * l2 * model.weights.dot(&model.weights)
}

/// Full-batch gradient descent on L2-regularized BCE, from zero weights.
/// The bias is unregularized. `seed` is accepted for interface uniformity;
/// the convex objective makes the result independent of it.
pub fn logreg_fit(
    features: &[Array1<f64>],
    labels: &[u8],
    cfg: &LogRegConfig,
    _seed: u64,
) -> Result<LogRegFit> {
    if features.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if features.len() != labels.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} features vs {} labels",
            features.len(),
            labels.len()
        )));
    }
    let dim = features[0].len();
    let n = features.len() as f64;
    let mut model = LogRegModel {
        weights: Array1::zeros(dim),
        bias: 0.0,
    };
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut grad_w = Array1::zeros(dim);
    for _ in 0..cfg.epochs {
        grad_w.fill(0.0);
        let mut grad_b = 0.0;
        for (x, &y) in features.iter().zip(labels) {
            let err = model.predict_proba(x) - f64::from(y);
            grad_w.scaled_add(err / n, x);
            grad_b += err / n;
        }
        grad_w.scaled_add(cfg.l2, &model.weights);
        model.weights.scaled_add(-cfg.learning_rate, &grad_w);
        model.bias -= cfg.learning_rate * grad_b;
        history.push(logreg_loss(&model, features, labels, cfg.l2));
    }
    Ok(LogRegFit {
        model,
        loss_history: history,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbdtConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
}

impl Default for GbdtConfig {
    fn default() -> Self {
        Self {
            n_trees: 200,
            max_depth: 3,
            learning_rate: 0.1,
        }
    }
}

/// Gradient-boosted regression trees on logistic loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtModel {
    pub trees: Vec<RegressionTree>,
    pub learning_rate: f64,
    /// Log-odds prior of the training labels.
    pub base_score: f64,
}

#[derive(Debug, Clone)]
pub struct GbdtFit {
    pub model: GbdtModel,
    /// Mean logistic loss on the training set after each added tree.
    pub loss_history: Vec<f64>,
}

/// p = sigma(base_score + learning_rate * sum of tree outputs).
pub fn gbdt_predict(model: &GbdtModel, feature: &Array1<f64>) -> f64 {
    let mut score = model.base_score;
    for tree in &model.trees {
        score += model.learning_rate * tree.evaluate(feature);
    }
    sigmoid(score)
}

const PROB_CLAMP: f64 = 1e-7;

/// Stagewise fitting: each tree regresses the residuals `y - p` (the
/// negative gradient of logistic loss) with greedy variance-reduction
/// splits; leaf values are Newton steps
/// `sum(residuals) / sum(p (1-p))` with a small-denominator guard.
pub fn gbdt_fit(
    features: &[Array1<f64>],
    labels: &[u8],
    cfg: &GbdtConfig,
    _seed: u64,
) -> Result<GbdtFit> {
    if features.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if features.len() != labels.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} features vs {} labels",
            features.len(),
            labels.len()
        )));
    }
    if cfg.n_trees < 1 {
        return Err(Error::InvalidParameter("n_trees must be >= 1".into()));
    }
    if cfg.max_depth < 1 {
        return Err(Error::InvalidParameter("max_depth must be >= 1".into()));
    }

    let n = features.len();
    let mean = labels.iter().map(|&y| f64::from(y)).sum::<f64>() / n as f64;
    let clamped = mean.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    let base_score = (clamped / (1.0 - clamped)).ln();

    let mut scores = vec![base_score; n];
    let mut trees = Vec::with_capacity(cfg.n_trees);
    let mut history = Vec::with_capacity(cfg.n_trees);
    for _ in 0..cfg.n_trees {
        let probs: Vec<f64> = scores.iter().map(|&s| sigmoid(s)).collect();
        let residuals: Vec<f64> = probs
            .iter()
            .zip(labels)
            .map(|(&p, &y)| f64::from(y) - p)
            .collect();
        let hessians: Vec<f64> = probs.iter().map(|&p| p * (1.0 - p)).collect();
        let tree = tree::grow(features, &residuals, &hessians, cfg.max_depth);
        for (idx, x) in features.iter().enumerate() {
            scores[idx] += cfg.learning_rate * tree.evaluate(x);
        }
        trees.push(tree);
        let loss: f64 = scores
            .iter()
            .zip(labels)
            .map(|(&s, &y)| bce_loss(sigmoid(s), y))
            .sum::<f64>()
            / n as f64;
        history.push(loss);
    }

    Ok(GbdtFit {
        model: GbdtModel {
            trees,
            learning_rate: cfg.learning_rate,
            base_score,
        },
        loss_history: history,
    })
}
