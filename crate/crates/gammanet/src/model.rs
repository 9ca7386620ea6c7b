//! The Gamma GLM probability model under a log link: negative
//! log-likelihood, its gradient, a locally estimated curvature bound, and
//! the smallest penalty strength that zeroes every coefficient.
//!
//! With shape `k` common to all rows and scale `theta_i = exp(a_i . x) / k`,
//! the per-row negative log density is
//!
//! ```text
//! lnGamma(k) + k*(a_i . x) - k*ln(k) - (k - 1)*ln(b_i) + k*b_i*exp(-(a_i . x))
//! ```
//!
//! All routines keep the x-independent constants so that held-out values are
//! comparable across folds and penalty strengths.

use statrs::function::gamma::ln_gamma;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// A Gamma GLM fitting problem: data, shape parameter, and the elastic-net
/// hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaGlmProblem {
    data: Dataset,
    shape: f64,
    lambda: f64,
    alpha: f64,
}

impl GammaGlmProblem {
    pub fn new(data: Dataset, shape: f64, lambda: f64, alpha: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::InvalidHyperparameter(format!(
                "shape must be positive and finite, got {shape}"
            )));
        }
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
        Ok(Self { data, shape, lambda, alpha })
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same problem, different penalty strength.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.data.clone(), self.shape, lambda, self.alpha)
    }

    fn check_coefficients(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.data.cols() {
            return Err(Error::CoefficientLength { got: x.len(), expected: self.data.cols() });
        }
        Ok(())
    }

    /// Negative log-likelihood at `x`, including the x-independent constants.
    ///
    /// Overflow of `exp(-(a_i . x))` surfaces as an error naming the row.
    pub fn nll(&self, x: &[f64]) -> Result<f64> {
        self.check_coefficients(x)?;
        let k = self.shape;
        let lgk = ln_gamma(k);
        let mut total = 0.0;
        for i in 0..self.data.rows() {
            let z = dot(self.data.row(i), x);
            let b = self.data.response(i);
            let term = lgk + k * z - k * k.ln() - (k - 1.0) * b.ln() + k * b * (-z).exp();
            if !term.is_finite() {
                return Err(Error::NonFiniteObjective { row: i, exponent: z.clamp(-700.0, 700.0) });
            }
            total += term;
        }
        Ok(total)
    }

    /// Analytic gradient of [`Self::nll`]: per coordinate j,
    /// `sum_i k * (1 - b_i * exp(-(a_i . x))) * a_ij`.
    pub fn nll_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_coefficients(x)?;
        let k = self.shape;
        let mut grad = vec![0.0; self.data.cols()];
        for i in 0..self.data.rows() {
            let row = self.data.row(i);
            let z = dot(row, x);
            let resid = 1.0 - self.data.response(i) * (-z).exp();
            if !resid.is_finite() {
                return Err(Error::NonFiniteObjective { row: i, exponent: z.clamp(-700.0, 700.0) });
            }
            let c = k * resid;
            for (g, &a) in grad.iter_mut().zip(row) {
                *g += c * a;
            }
        }
        Ok(grad)
    }

    /// Locally estimated quadratic upper bound on the NLL curvature at `x`:
    /// `||A||_F^2 * sum_i k^2 * (1 - b_i exp(-(a_i . x)))^2`, floored so a
    /// perfect fit still yields a usable (finite) step size.
    pub fn local_curvature_bound(&self, x: &[f64]) -> Result<f64> {
        self.check_coefficients(x)?;
        let k = self.shape;
        let mut sum_sq = 0.0;
        for i in 0..self.data.rows() {
            let z = dot(self.data.row(i), x);
            let resid = 1.0 - self.data.response(i) * (-z).exp();
            if !resid.is_finite() {
                return Err(Error::NonFiniteObjective { row: i, exponent: z.clamp(-700.0, 700.0) });
            }
            sum_sq += resid * resid;
        }
        let raw = self.data.frobenius_sq() * k * k * sum_sq;
        Ok(raw.max(curvature_floor(&self.data)))
    }

    /// Single fused pass computing the NLL, gradient, and floored curvature
    /// bound at `x`. Non-finite values are propagated (as inf/NaN) rather
    /// than reported; the solver treats them as a step-rejection signal.
    pub(crate) fn evaluate_into(&self, x: &[f64], grad: &mut [f64]) -> RawEvaluation {
        let k = self.shape;
        let lgk = ln_gamma(k);
        let lnk = k.ln();
        grad.fill(0.0);
        let mut nll = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..self.data.rows() {
            let row = self.data.row(i);
            let z = dot(row, x);
            let b = self.data.response(i);
            let e = (-z).exp();
            nll += lgk + k * z - k * lnk - (k - 1.0) * b.ln() + k * b * e;
            let resid = 1.0 - b * e;
            sum_sq += resid * resid;
            let c = k * resid;
            for (g, &a) in grad.iter_mut().zip(row) {
                *g += c * a;
            }
        }
        let raw = self.data.frobenius_sq() * k * k * sum_sq;
        RawEvaluation { nll, curvature: raw.max(curvature_floor(&self.data)) }
    }

    /// Like [`Self::nll`] but mapping overflow to +inf instead of an error;
    /// used inside the line search where non-finite means "reject the step".
    pub(crate) fn nll_or_inf(&self, x: &[f64]) -> f64 {
        let k = self.shape;
        let lgk = ln_gamma(k);
        let lnk = k.ln();
        let mut total = 0.0;
        for i in 0..self.data.rows() {
            let z = dot(self.data.row(i), x);
            let b = self.data.response(i);
            total += lgk + k * z - k * lnk - (k - 1.0) * b.ln() + k * b * (-z).exp();
        }
        if total.is_finite() {
            total
        } else {
            f64::INFINITY
        }
    }
}

/// Gradient and curvature from one fused scan; the gradient lands in the
/// caller's buffer.
pub(crate) struct RawEvaluation {
    pub nll: f64,
    pub curvature: f64,
}

/// Positive floor for the curvature bound. The raw bound vanishes at a
/// perfect fit, which would mean an infinite step.
pub(crate) fn curvature_floor(data: &Dataset) -> f64 {
    1e-6 * (1.0 + data.frobenius_sq())
}

/// Smallest penalty strength at which the all-zero coefficient vector is
/// optimal: `max_j |grad_j NLL(0)| / alpha`.
///
/// The result is nudged up by ulps if needed so that `lambda_max * alpha >=
/// max_j |grad_j|` holds exactly in floating point; the zero-solution
/// property is exact, not approximate.
pub fn lambda_max(data: &Dataset, shape: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::AlphaZeroLambdaMax);
    }
    let k = shape;
    let mut max_abs = 0.0_f64;
    for j in 0..data.cols() {
        let mut g = 0.0;
        for i in 0..data.rows() {
            g += k * (1.0 - data.response(i)) * data.row(i)[j];
        }
        max_abs = max_abs.max(g.abs());
    }
    let mut lm = max_abs / alpha;
    while lm * alpha < max_abs {
        lm = lm.next_up();
    }
    Ok(lm)
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(design: Vec<Vec<f64>>, b: Vec<f64>, k: f64) -> GammaGlmProblem {
        let data = Dataset::from_rows(design, b).unwrap();
        GammaGlmProblem::new(data, k, 0.0, 1.0).unwrap()
    }

    #[test]
    fn nll_unit_case() {
        // k=1, A=[0], b=[1], x=[0]: every term vanishes except k*b*e^0 = 1.
        let p = problem(vec![vec![0.0]], vec![1.0], 1.0);
        assert!((p.nll(&[0.0]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nll_hand_value() {
        // k=2, A=[[1]], b=[e], x=[1]: 0 + 2 - 2 ln 2 - 1 + 2 = 3 - 2 ln 2.
        let p = problem(vec![vec![1.0]], vec![std::f64::consts::E], 2.0);
        let expected = 3.0 - 2.0 * 2.0_f64.ln();
        assert!((p.nll(&[1.0]).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.6137056388801094).abs() < 1e-15);
    }

    #[test]
    fn nll_overflow_names_row() {
        let p = problem(vec![vec![1.0], vec![-800.0]], vec![1.0, 1.0], 1.0);
        match p.nll(&[1.0]) {
            Err(Error::NonFiniteObjective { row, exponent }) => {
                assert_eq!(row, 1);
                assert_eq!(exponent, -700.0); // clamped for reporting
            }
            other => panic!("expected overflow diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn gradient_vanishes_at_model_mean() {
        // b_i = exp(a_i . x) makes every residual zero.
        let x = [0.3, -0.7];
        let design = vec![vec![1.0, 2.0], vec![-0.5, 0.25], vec![2.0, 1.0]];
        let b: Vec<f64> = design.iter().map(|r| dot(r, &x).exp()).collect();
        let p = problem(design, b, 1.7);
        let g = p.nll_gradient(&x).unwrap();
        for gj in g {
            assert!(gj.abs() < 1e-12, "gradient component {gj} not ~0");
        }
    }

    #[test]
    fn gradient_hand_value() {
        // k=1, A=[[1],[-1]], b=[2, 0.5], x=[0] -> (1-2)*1 + (1-0.5)*(-1) = -1.5
        let p = problem(vec![vec![1.0], vec![-1.0]], vec![2.0, 0.5], 1.0);
        let g = p.nll_gradient(&[0.0]).unwrap();
        assert_eq!(g, vec![-1.5]);
    }

    #[test]
    fn curvature_hand_value() {
        let p = problem(vec![vec![1.0], vec![-1.0]], vec![2.0, 0.5], 1.0);
        // ||A||_F^2 = 2, residuals (-1, 0.5): 2 * (1 + 0.25) = 2.5
        assert!((p.local_curvature_bound(&[0.0]).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn curvature_floor_engages_at_perfect_fit() {
        let x = [0.4];
        let design = vec![vec![1.0], vec![-2.0]];
        let b: Vec<f64> = design.iter().map(|r| dot(r, &x).exp()).collect();
        let data = Dataset::from_rows(design, b).unwrap();
        let floor = curvature_floor(&data);
        let p = GammaGlmProblem::new(data, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(p.local_curvature_bound(&x).unwrap(), floor);
        assert!(floor > 0.0);
    }

    #[test]
    fn curvature_scales_with_shape_squared() {
        // Holding residuals fixed via b, k -> 2k multiplies the raw bound by 4.
        let design = vec![vec![1.0], vec![-1.0]];
        let b = vec![2.0, 0.5];
        let l1 = problem(design.clone(), b.clone(), 1.0).local_curvature_bound(&[0.0]).unwrap();
        let l2 = problem(design, b, 2.0).local_curvature_bound(&[0.0]).unwrap();
        assert!((l2 / l1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_max_zero_when_responses_are_one() {
        let data =
            Dataset::from_rows(vec![vec![3.0, -1.0], vec![0.5, 2.0]], vec![1.0, 1.0]).unwrap();
        assert_eq!(lambda_max(&data, 2.5, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn lambda_max_hand_value() {
        let data = Dataset::from_rows(vec![vec![1.0], vec![-1.0]], vec![2.0, 0.5]).unwrap();
        assert_eq!(lambda_max(&data, 1.0, 1.0).unwrap(), 1.5);
    }

    #[test]
    fn lambda_max_alpha_zero_errors() {
        let data = Dataset::from_rows(vec![vec![1.0]], vec![2.0]).unwrap();
        assert!(matches!(lambda_max(&data, 1.0, 0.0), Err(Error::AlphaZeroLambdaMax)));
    }

    #[test]
    fn lambda_max_product_never_undershoots() {
        // The ulp guard: lambda_max * alpha >= max_j |grad_j| exactly.
        let data = Dataset::from_rows(
            vec![vec![0.123456789, -2.5], vec![1.7, 0.3], vec![-0.9, 1.1]],
            vec![0.37, 2.9, 1.4],
        )
        .unwrap();
        for &alpha in &[0.1, 0.3, 0.7, 0.9999, 1.0] {
            let lm = lambda_max(&data, 1.3, alpha).unwrap();
            let g = GammaGlmProblem::new(data.clone(), 1.3, 0.0, alpha)
                .unwrap()
                .nll_gradient(&[0.0, 0.0])
                .unwrap();
            let max_abs = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!(lm * alpha >= max_abs, "alpha={alpha}: {} < {}", lm * alpha, max_abs);
        }
    }
}
