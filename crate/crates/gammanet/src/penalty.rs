//! Elastic-net penalty and its closed-form proximity operator.

use crate::error::{Error, Result};

/// The elastic-net penalty `lambda * (alpha*||x||_1 + (1-alpha)/2*||x||_2^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnPenalty {
    lambda: f64,
    alpha: f64,
}

impl EnPenalty {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidHyperparameter(format!(
                "lambda must be nonnegative and finite, got {lambda}"
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidHyperparameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(Self { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Penalty value at `x`.
    pub fn penalty(&self, x: &[f64]) -> f64 {
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        let l2_sq: f64 = x.iter().map(|v| v * v).sum();
        self.lambda * (self.alpha * l1 + 0.5 * (1.0 - self.alpha) * l2_sq)
    }

    /// Proximity operator with step `t`: elementwise soft-threshold at
    /// `t*lambda*alpha` followed by the ridge shrink `1/(1 + t*lambda*(1-alpha))`.
    ///
    /// Coordinates at or below the threshold come out as exact `0.0`, which
    /// downstream zero-coefficient counting relies on.
    pub fn prox(&self, t: f64, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        self.prox_into(t, v, &mut out);
        out
    }

    /// In-place variant of [`Self::prox`] for allocation-free inner loops.
    pub fn prox_into(&self, t: f64, v: &[f64], out: &mut [f64]) {
        debug_assert!(t > 0.0);
        debug_assert_eq!(v.len(), out.len());
        let threshold = t * self.lambda * self.alpha;
        let shrink = 1.0 / (1.0 + t * self.lambda * (1.0 - self.alpha));
        for (o, &vj) in out.iter_mut().zip(v) {
            let mag = vj.abs() - threshold;
            *o = if mag > 0.0 { vj.signum() * mag * shrink } else { 0.0 };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn penalty_zero_at_origin() {
        let pen = EnPenalty::new(3.0, 0.4).unwrap();
        assert_eq!(pen.penalty(&[0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn penalty_hand_value() {
        // lambda=2, alpha=0.5, x=[1,-1]: 2*(0.5*2 + 0.25*2) = 3
        let pen = EnPenalty::new(2.0, 0.5).unwrap();
        assert_eq!(pen.penalty(&[1.0, -1.0]), 3.0);
    }

    #[test]
    fn penalty_pure_l1() {
        let pen = EnPenalty::new(1.0, 1.0).unwrap();
        assert_eq!(pen.penalty(&[3.0]), 3.0);
    }

    #[test]
    fn prox_of_zero_is_zero() {
        let pen = EnPenalty::new(5.0, 0.3).unwrap();
        assert_eq!(pen.prox(0.7, &[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn prox_soft_threshold() {
        // t=1, lambda=1, alpha=1: soft-threshold at 1.
        let pen = EnPenalty::new(1.0, 1.0).unwrap();
        let out = pen.prox(1.0, &[2.0, -0.5]);
        assert_eq!(out, vec![1.0, 0.0]);
        // the zero is exact and positive
        assert!(out[1].to_bits() == 0.0_f64.to_bits());
    }

    #[test]
    fn prox_pure_ridge() {
        // t=1, lambda=1, alpha=0: v / (1+1).
        let pen = EnPenalty::new(1.0, 0.0).unwrap();
        assert_eq!(pen.prox(1.0, &[2.0]), vec![1.0]);
    }

    #[test]
    fn prox_invalid_params_rejected() {
        assert!(EnPenalty::new(-1.0, 0.5).is_err());
        assert!(EnPenalty::new(1.0, 1.5).is_err());
        assert!(EnPenalty::new(f64::NAN, 0.5).is_err());
    }
}
