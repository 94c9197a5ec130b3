//! Binary cross-entropy over a sigmoid probability.

/// Probability clamp for numerical stability.
pub const BCE_EPS: f64 = 1e-7;

/// L = -[y ln(p~) + (1-y) ln(1-p~)] with p~ = clamp(p, eps, 1-eps).
pub fn bce_loss(p: f64, y: u8) -> f64 {
    let p = p.clamp(BCE_EPS, 1.0 - BCE_EPS);
    if y == 1 {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

/// Gradient of the clamped BCE with respect to the pre-sigmoid logit.
/// Inside the clamp band this is the usual `p - y`; on the clamp plateau
/// the loss is flat in p, so the gradient is exactly 0.
pub(crate) fn bce_logit_grad(p: f64, y: u8) -> f64 {
    if p <= BCE_EPS || p >= 1.0 - BCE_EPS {
        0.0
    } else {
        p - f64::from(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_at_half() {
        assert!((bce_loss(0.5, 0) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((bce_loss(0.5, 1) - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn perfect_prediction_limit() {
        assert!(bce_loss(1.0 - BCE_EPS, 1) < 1.5e-7);
        assert!(bce_loss(1.0, 1) < 1.5e-7); // clamped
    }

    #[test]
    fn hand_computed_value() {
        // p = 0.9, y = 0 -> -ln(0.1) = ln(10)
        assert!((bce_loss(0.9, 0) - std::f64::consts::LN_10).abs() < 1e-12);
    }

    #[test]
    fn strictly_decreasing_in_p_for_positive_label() {
        let mut prev = bce_loss(BCE_EPS * 2.0, 1);
        let mut p = BCE_EPS * 2.0;
        while p < 1.0 - BCE_EPS * 2.0 {
            p += 0.01;
            let next = bce_loss(p.min(1.0 - BCE_EPS * 2.0), 1);
            assert!(next < prev);
            prev = next;
        }
    }

    #[test]
    fn logit_grad_zero_on_clamp_plateau() {
        assert_eq!(bce_logit_grad(1.0, 1), 0.0);
        assert_eq!(bce_logit_grad(0.0, 0), 0.0);
        assert!((bce_logit_grad(0.7, 1) - (0.7 - 1.0)).abs() < 1e-15);
    }
}
