//! Axis-aligned regression trees fitted to boosting residuals.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

/// Guard against near-zero Newton denominators.
const LEAF_DENOM_GUARD: f64 = 1e-9;
/// Minimum variance reduction for a split to be worth taking.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub root: TreeNode,
}

impl RegressionTree {
    pub fn evaluate(&self, x: &Array1<f64>) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }
}

/// Newton leaf value: sum(residuals) / sum(hessians), guarded.
fn leaf_value(indices: &[usize], residuals: &[f64], hessians: &[f64]) -> TreeNode {
    let num: f64 = indices.iter().map(|&i| residuals[i]).sum();
    let denom: f64 = indices.iter().map(|&i| hessians[i]).sum();
    TreeNode::Leaf {
        value: num / denom.max(LEAF_DENOM_GUARD),
    }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Greedy variance-reduction split over all features; candidate thresholds
/// are midpoints between consecutive distinct feature values. Ties keep
/// the first (lowest feature index, lowest threshold) candidate.
#[allow(clippy::needless_range_loop)]
fn best_split(features: &[Array1<f64>], residuals: &[f64], indices: &[usize]) -> Option<BestSplit> {
    let n = indices.len();
    if n < 2 {
        return None;
    }
    let n_features = features[indices[0]].len();
    let total_sum: f64 = indices.iter().map(|&i| residuals[i]).sum();
    let total_sq: f64 = indices.iter().map(|&i| residuals[i] * residuals[i]).sum();
    let parent_sse = total_sq - total_sum * total_sum / n as f64;

    let mut best: Option<BestSplit> = None;
    let mut sorted = indices.to_vec();
    for feature in 0..n_features {
        sorted.sort_by(|&a, &b| {
            features[a][feature]
                .partial_cmp(&features[b][feature])
                .expect("finite feature values")
        });
        let mut left_sum = 0.0;
        let mut left_sq = 0.0;
        for pos in 0..n - 1 {
            let idx = sorted[pos];
            left_sum += residuals[idx];
            left_sq += residuals[idx] * residuals[idx];
            let here = features[idx][feature];
            let next = features[sorted[pos + 1]][feature];
            if here == next {
                continue;
            }
            let left_n = (pos + 1) as f64;
            let right_n = (n - pos - 1) as f64;
            let right_sum = total_sum - left_sum;
            let right_sq = total_sq - left_sq;
            let sse = (left_sq - left_sum * left_sum / left_n)
                + (right_sq - right_sum * right_sum / right_n);
            let gain = parent_sse - sse;
            if gain > best.as_ref().map_or(MIN_GAIN, |b| b.gain) {
                best = Some(BestSplit {
                    feature,
                    threshold: 0.5 * (here + next),
                    gain,
                    left: sorted[..=pos].to_vec(),
                    right: sorted[pos + 1..].to_vec(),
                });
            }
        }
    }
    best
}

fn grow_node(
    features: &[Array1<f64>],
    residuals: &[f64],
    hessians: &[f64],
    indices: &[usize],
    depth_left: usize,
) -> TreeNode {
    if depth_left == 0 || indices.len() < 2 {
        return leaf_value(indices, residuals, hessians);
    }
    match best_split(features, residuals, indices) {
        None => leaf_value(indices, residuals, hessians),
        Some(split) => TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(grow_node(
                features,
                residuals,
                hessians,
                &split.left,
                depth_left - 1,
            )),
            right: Box::new(grow_node(
                features,
                residuals,
                hessians,
                &split.right,
                depth_left - 1,
            )),
        },
    }
}

pub(crate) fn grow(
    features: &[Array1<f64>],
    residuals: &[f64],
    hessians: &[f64],
    max_depth: usize,
) -> RegressionTree {
    let indices: Vec<usize> = (0..features.len()).collect();
    RegressionTree {
        root: grow_node(features, residuals, hessians, &indices, max_depth),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr1;

    #[test]
    fn depth_is_bounded() {
        let features: Vec<_> = (0..32).map(|i| arr1(&[i as f64, (i % 7) as f64])).collect();
        let residuals: Vec<f64> = (0..32).map(|i| ((i * 13) % 5) as f64 - 2.0).collect();
        let hessians = vec![0.25; 32];
        for max_depth in 1..4 {
            let tree = grow(&features, &residuals, &hessians, max_depth);
            assert!(tree.depth() <= max_depth);
        }
    }

    #[test]
    fn pure_node_becomes_leaf() {
        let features: Vec<_> = (0..4).map(|i| arr1(&[i as f64])).collect();
        let residuals = vec![0.5; 4];
        let hessians = vec![0.25; 4];
        let tree = grow(&features, &residuals, &hessians, 3);
        match tree.root {
            TreeNode::Leaf { value } => {
                // Newton step: (4 * 0.5) / (4 * 0.25) = 2
                assert!((value - 2.0).abs() < 1e-12);
            }
            _ => panic!("constant residuals admit no useful split"),
        }
    }

    #[test]
    fn identical_feature_values_cannot_split() {
        let features: Vec<_> = (0..4).map(|_| arr1(&[1.0])).collect();
        let residuals = vec![-1.0, 1.0, -1.0, 1.0];
        let hessians = vec![0.25; 4];
        let tree = grow(&features, &residuals, &hessians, 2);
        assert!(matches!(tree.root, TreeNode::Leaf { .. }));
    }
}
