//! Adam optimizer with bias correction.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First/second moment estimates plus the step count.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        Self {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            step: 0,
        }
    }

    /// One bias-corrected update:
    /// m = b1 m + (1-b1) g; v = b2 v + (1-b2) g^2;
    /// theta -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
    pub fn step(&mut self, params: &mut [f64], grads: &[f64], cfg: &AdamConfig) {
        assert_eq!(params.len(), grads.len());
        assert_eq!(params.len(), self.m.len());
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - cfg.beta1.powi(t);
        let bc2 = 1.0 - cfg.beta2.powi(t);
        for idx in 0..params.len() {
            let g = grads[idx];
            self.m[idx] = cfg.beta1 * self.m[idx] + (1.0 - cfg.beta1) * g;
            self.v[idx] = cfg.beta2 * self.v[idx] + (1.0 - cfg.beta2) * g * g;
            let m_hat = self.m[idx] / bc1;
            let v_hat = self.v[idx] / bc2;
            params[idx] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let mut params = vec![1.0, -2.0, 3.0];
        let grads = vec![0.0; 3];
        let mut state = AdamState::new(3);
        state.step(&mut params, &grads, &AdamConfig::default());
        assert_eq!(params, vec![1.0, -2.0, 3.0]);
        assert_eq!(state.step, 1);
    }

    #[test]
    fn first_step_magnitude_is_learning_rate() {
        // bias-corrected first step: |update| = lr * |g| / (|g| + eps) ~ lr
        let cfg = AdamConfig::default();
        for &g in &[0.5, -3.0, 1e-3] {
            let mut params = vec![0.0];
            let mut state = AdamState::new(1);
            state.step(&mut params, &[g], &cfg);
            let update = -params[0];
            // deviation from lr is eps/|g| relative, at most 1e-5 here
            assert!(
                (update.abs() - cfg.learning_rate).abs() < 1e-4 * cfg.learning_rate,
                "g = {g}, update = {update}"
            );
            assert_eq!(update.signum(), g.signum());
        }
    }

    #[test]
    fn matches_two_step_hand_trace() {
        // Independent two-iteration evaluation of the update formulas for
        // a constant scalar gradient.
        let cfg = AdamConfig {
            learning_rate: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        };
        let g = 0.4;
        let mut expected_param = 2.0f64;
        let mut m = 0.0f64;
        let mut v = 0.0f64;
        for t in 1..=2 {
            m = 0.9 * m + 0.1 * g;
            v = 0.999 * v + 0.001 * g * g;
            let m_hat = m / (1.0 - 0.9f64.powi(t));
            let v_hat = v / (1.0 - 0.999f64.powi(t));
            expected_param -= 0.1 * m_hat / (v_hat.sqrt() + 1e-8);
        }

        let mut params = vec![2.0];
        let mut state = AdamState::new(1);
        state.step(&mut params, &[g], &cfg);
        state.step(&mut params, &[g], &cfg);
        assert!((params[0] - expected_param).abs() < 1e-15);
        assert_eq!(state.step, 2);
    }
}
