//! Accelerated proximal-gradient (FISTA) minimization of the penalized
//! Gamma NLL.
//!
//! The step size comes from the locally estimated curvature bound at the
//! momentum point, re-evaluated every iteration. Because that bound is a
//! heuristic rather than a global Lipschitz constant, each step is guarded:
//! if the candidate does not descend, the momentum sequence restarts and the
//! step is halved until it does. In practice the guard stays dormant; an
//! activation counter reports when it does not.

use crate::error::{Error, Result};
use crate::model::GammaGlmProblem;
use crate::penalty::EnPenalty;

/// Stopping and line-search knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Fixed-point residual tolerance: the solve stops once
    /// `||x - prox(x - grad/L)||_inf <= tol`.
    pub tol: f64,
    /// Iteration cap; exceeding it yields `converged = false`, not an error.
    pub max_iter: usize,
    /// Step shrink factor in (0,1) applied on each safeguard retry.
    pub line_search_backtrack: f64,
    /// Maximum safeguard retries within one iteration.
    pub line_search_max: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-7, max_iter: 10_000, line_search_backtrack: 0.5, line_search_max: 60 }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidHyperparameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidHyperparameter("max_iter must be at least 1".into()));
        }
        if !(self.line_search_backtrack > 0.0 && self.line_search_backtrack < 1.0) {
            return Err(Error::InvalidHyperparameter(format!(
                "line_search_backtrack must lie in (0,1), got {}",
                self.line_search_backtrack
            )));
        }
        Ok(())
    }
}

/// Extra solve behavior that is not part of the statistical model itself.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveOptions {
    /// Column exempt from the penalty (an appended intercept). The prox acts
    /// as the identity on it and it contributes nothing to the penalty term.
    pub unpenalized_column: Option<usize>,
}

/// Iteration state of the accelerated scheme.
#[derive(Debug, Clone)]
pub struct SolverState {
    /// Current iterate.
    pub x: Vec<f64>,
    /// Auxiliary (momentum) point the gradient step is taken from.
    pub omega: Vec<f64>,
    /// Momentum scalar; follows `s_next = (1 + sqrt(1 + 4 s^2)) / 2` and
    /// resets to 1 whenever the safeguard activates.
    pub s: f64,
    /// Gradient of the NLL at `omega`.
    pub d: Vec<f64>,
    /// Count of accepted steps.
    pub iter: usize,
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Fitted coefficients, length p.
    pub coefficients: Vec<f64>,
    /// Penalized objective at the start point and after each accepted step;
    /// non-increasing by construction.
    pub objective_trace: Vec<f64>,
    /// Accepted iterations performed.
    pub iterations: usize,
    /// Whether the fixed-point residual reached `tol`.
    pub converged: bool,
    /// Final fixed-point residual (inf-norm).
    pub residual: f64,
    /// Total safeguard step-halvings across the solve.
    pub line_search_activations: u64,
}

impl FitResult {
    /// Final penalized objective value.
    pub fn objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace holds at least the start value")
    }
}

/// Minimize `NLL + R_EN` for the given problem. The default start is the
/// zero vector; pass `warm_start` to begin elsewhere (e.g. along a path).
pub fn solve(
    problem: &GammaGlmProblem,
    config: &SolverConfig,
    warm_start: Option<&[f64]>,
) -> Result<FitResult> {
    solve_with_options(problem, config, warm_start, &SolveOptions::default())
}

/// [`solve`] with an optional unpenalized column.
pub fn solve_with_options(
    problem: &GammaGlmProblem,
    config: &SolverConfig,
    warm_start: Option<&[f64]>,
    options: &SolveOptions,
) -> Result<FitResult> {
    config.validate()?;
    let p = problem.data().cols();
    if let Some(c) = options.unpenalized_column {
        if c >= p {
            return Err(Error::InvalidHyperparameter(format!(
                "unpenalized column {c} out of range for p = {p}"
            )));
        }
    }
    let x0 = match warm_start {
        Some(w) => {
            if w.len() != p {
                return Err(Error::CoefficientLength { got: w.len(), expected: p });
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidHyperparameter(
                    "warm start contains non-finite values".into(),
                ));
            }
            w.to_vec()
        }
        None => vec![0.0; p],
    };
    let mut fista = Fista::new(problem, config, options, x0)?;
    let mut converged = fista.initial_residual() <= config.tol;
    while !converged && fista.state.iter < config.max_iter {
        converged = fista.step()?;
    }
    Ok(fista.into_result(converged))
}

/// `prox_{(1/l) R}(base - (1/l) grad)` into `out`, via the `shifted` scratch.
fn prox_step_into(
    penalty: &EnPenalty,
    skip: Option<usize>,
    base: &[f64],
    grad: &[f64],
    l: f64,
    shifted: &mut [f64],
    out: &mut [f64],
) {
    let t = 1.0 / l;
    for ((sh, &b), &g) in shifted.iter_mut().zip(base).zip(grad) {
        *sh = b - t * g;
    }
    penalty.prox_into(t, shifted, out);
    if let Some(c) = skip {
        out[c] = shifted[c];
    }
}

/// Inf-norm of `x - prox_{(1/l) R}(x - (1/l) grad)`.
fn fixed_point_residual(
    penalty: &EnPenalty,
    skip: Option<usize>,
    x: &[f64],
    grad: &[f64],
    l: f64,
    shifted: &mut [f64],
    proxed: &mut [f64],
) -> f64 {
    prox_step_into(penalty, skip, x, grad, l, shifted, proxed);
    x.iter().zip(proxed.iter()).map(|(&a, &b)| (a - b).abs()).fold(0.0_f64, f64::max)
}

/// The iteration engine. Kept separate from [`solve`] so tests can drive
/// single steps and inspect the momentum sequence.
pub(crate) struct Fista<'a> {
    problem: &'a GammaGlmProblem,
    penalty: EnPenalty,
    skip: Option<usize>,
    config: &'a SolverConfig,
    pub(crate) state: SolverState,
    h_cur: f64,
    trace: Vec<f64>,
    pub(crate) activations: u64,
    last_residual: f64,
    // scratch buffers
    candidate: Vec<f64>,
    shifted: Vec<f64>,
    grad_at_x: Vec<f64>,
}

impl<'a> Fista<'a> {
    pub(crate) fn new(
        problem: &'a GammaGlmProblem,
        config: &'a SolverConfig,
        options: &SolveOptions,
        x0: Vec<f64>,
    ) -> Result<Self> {
        let penalty = EnPenalty::new(problem.lambda(), problem.alpha())?;
        let p = x0.len();
        let mut fista = Fista {
            problem,
            penalty,
            skip: options.unpenalized_column,
            config,
            state: SolverState {
                x: x0.clone(),
                omega: x0,
                s: 1.0,
                d: vec![0.0; p],
                iter: 0,
            },
            h_cur: 0.0,
            trace: Vec::new(),
            activations: 0,
            last_residual: f64::INFINITY,
            candidate: vec![0.0; p],
            shifted: vec![0.0; p],
            grad_at_x: vec![0.0; p],
        };
        let h0 = fista.objective(&fista.state.x);
        if !h0.is_finite() {
            // Re-run through the diagnostic path to name the offending row.
            let inner = match fista.problem.nll(&fista.state.x) {
                Err(e) => e,
                Ok(v) => Error::InvalidHyperparameter(format!(
                    "objective non-finite at start (nll = {v}, penalty non-finite)"
                )),
            };
            return Err(Error::NonFiniteStart(Box::new(inner)));
        }
        fista.h_cur = h0;
        fista.trace.push(h0);
        Ok(fista)
    }

    fn penalty_value(&self, x: &[f64]) -> f64 {
        match self.skip {
            None => self.penalty.penalty(x),
            Some(c) => {
                let mut tmp = x.to_vec();
                tmp[c] = 0.0;
                self.penalty.penalty(&tmp)
            }
        }
    }

    fn objective(&self, x: &[f64]) -> f64 {
        self.problem.nll_or_inf(x) + self.penalty_value(x)
    }

    /// Residual at the start point, checked before any step is taken so a
    /// warm start at the solution costs zero iterations.
    pub(crate) fn initial_residual(&mut self) -> f64 {
        let eval = self.problem.evaluate_into(&self.state.x, &mut self.grad_at_x);
        let r = fixed_point_residual(
            &self.penalty,
            self.skip,
            &self.state.x,
            &self.grad_at_x,
            eval.curvature,
            &mut self.shifted,
            &mut self.candidate,
        );
        self.last_residual = r;
        r
    }

    /// One accepted FISTA iteration. Returns `Ok(true)` when the fixed-point
    /// residual at the new iterate is within tolerance.
    pub(crate) fn step(&mut self) -> Result<bool> {
        let eval_w = self.problem.evaluate_into(&self.state.omega, &mut self.state.d);
        let mut h_new = f64::INFINITY;
        let mut rejected = true;
        if eval_w.nll.is_finite() && eval_w.curvature.is_finite() {
            prox_step_into(
                &self.penalty,
                self.skip,
                &self.state.omega,
                &self.state.d,
                eval_w.curvature,
                &mut self.shifted,
                &mut self.candidate,
            );
            h_new = self.objective(&self.candidate);
            rejected = !(h_new <= self.h_cur);
        }

        if rejected {
            // Safeguard: restart momentum at the current iterate and halve
            // the step until the objective decreases.
            self.state.s = 1.0;
            self.state.omega.copy_from_slice(&self.state.x);
            let eval_x = self.problem.evaluate_into(&self.state.x, &mut self.state.d);
            let mut l = if eval_w.curvature.is_finite() {
                eval_x.curvature.max(eval_w.curvature)
            } else {
                eval_x.curvature
            };
            let mut accepted = false;
            for _ in 0..self.config.line_search_max {
                l /= self.config.line_search_backtrack;
                self.activations += 1;
                prox_step_into(
                    &self.penalty,
                    self.skip,
                    &self.state.x,
                    &self.state.d,
                    l,
                    &mut self.shifted,
                    &mut self.candidate,
                );
                h_new = self.objective(&self.candidate);
                if h_new <= self.h_cur {
                    accepted = true;
                    break;
                }
            }
            if !accepted {
                let residual = fixed_point_residual(
                    &self.penalty,
                    self.skip,
                    &self.state.x,
                    &self.state.d,
                    eval_x.curvature,
                    &mut self.shifted,
                    &mut self.candidate,
                );
                return Err(Error::LineSearchFailed {
                    iteration: self.state.iter,
                    attempts: self.config.line_search_max,
                    residual,
                });
            }
        }

        // Accept: momentum bookkeeping, then convergence check at the new x.
        let s_old = self.state.s;
        let s_new = 0.5 * (1.0 + (1.0 + 4.0 * s_old * s_old).sqrt());
        let beta = (s_old - 1.0) / s_new;
        for j in 0..self.candidate.len() {
            self.state.omega[j] = self.candidate[j] + beta * (self.candidate[j] - self.state.x[j]);
        }
        std::mem::swap(&mut self.state.x, &mut self.candidate);
        self.state.s = s_new;
        self.state.iter += 1;
        self.h_cur = h_new;
        self.trace.push(h_new);

        let eval = self.problem.evaluate_into(&self.state.x, &mut self.grad_at_x);
        let r = fixed_point_residual(
            &self.penalty,
            self.skip,
            &self.state.x,
            &self.grad_at_x,
            eval.curvature,
            &mut self.shifted,
            &mut self.candidate,
        );
        self.last_residual = r;
        Ok(r <= self.config.tol)
    }

    fn into_result(self, converged: bool) -> FitResult {
        FitResult {
            coefficients: self.state.x,
            objective_trace: self.trace,
            iterations: self.state.iter,
            converged,
            residual: self.last_residual,
            line_search_activations: self.activations,
        }
    }
}
