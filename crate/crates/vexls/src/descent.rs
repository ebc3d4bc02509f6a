//! Gradient-descent steppers (plain, Jacobian-diagonal preconditioned, and
//! scaled by diag(JᵀJ)) with Armijo backtracking, the restarted
//! extrapolation drivers that couple them with RRE/MPE/VEA, and a damped
//! Gauss-Newton baseline.
//!
//! The restarted drivers work in cycles: generate a short window of
//! stepper iterates, extrapolate it, test the extrapolated vector against
//! the last iterate of the cycle, and either stop or restart the stepper
//! from the extrapolated point.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::extrapolate::{
    mpe, rre, vea, ExtrapConfig, ExtrapolationOutcome, SequenceWindow,
};
use crate::numkit::{dot, least_squares_qr, norm2, solve_tridiag_spd};
use crate::problems::NllsProblem;

/// Direction choice of the inner stepper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMethod {
    /// Plain gradient descent.
    Gd,
    /// Preconditioned by diag(J_f); requires a square Jacobian.
    Pgd,
    /// Scaled by diag(J_fᵀ J_f); works for rectangular Jacobians.
    Sgd,
}

impl std::fmt::Display for StepMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepMethod::Gd => write!(f, "gd"),
            StepMethod::Pgd => write!(f, "pgd"),
            StepMethod::Sgd => write!(f, "sgd"),
        }
    }
}

/// Stepper parameters. `omega` is the Armijo constant; the customary
/// values are 1e-4 for plain/preconditioned descent and 0.5 for the
/// scaled variant, which [`StepperConfig::new`] applies.
#[derive(Debug, Clone, Copy)]
pub struct StepperConfig {
    pub method: StepMethod,
    pub omega: f64,
    pub tau0: f64,
    pub max_halvings: u32,
    pub diag_floor: f64,
}

impl StepperConfig {
    pub fn new(method: StepMethod) -> Self {
        let omega = match method {
            StepMethod::Gd | StepMethod::Pgd => 1e-4,
            StepMethod::Sgd => 0.5,
        };
        Self { method, omega, tau0: 1.0, max_halvings: 50, diag_floor: 1e-12 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 1.0) {
            return Err(Error::Config(format!("omega must lie in (0, 1), got {}", self.omega)));
        }
        if self.tau0 <= 0.0 {
            return Err(Error::Config(format!("tau0 must be positive, got {}", self.tau0)));
        }
        if self.max_halvings == 0 {
            return Err(Error::Config("max_halvings must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which transform the restarted driver applies between cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtrapChoice {
    None,
    Rre,
    Mpe,
    Vea,
}

/// Restart length, transform, stopping tolerance and budget of a run.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    /// Restart length: a cycle takes q + 1 stepper steps for RRE/MPE and
    /// 2q for VEA.
    pub q: usize,
    pub extrap: ExtrapChoice,
    /// Relative successive-iterate tolerance.
    pub tol: f64,
    /// Budget of inner stepper steps.
    pub itermax: usize,
    pub extrap_cfg: ExtrapConfig,
}

impl SolveConfig {
    pub fn plain() -> Self {
        Self {
            q: 1,
            extrap: ExtrapChoice::None,
            tol: 1e-5,
            itermax: 500,
            extrap_cfg: ExtrapConfig::default(),
        }
    }

    pub fn with_extrap(extrap: ExtrapChoice, q: usize) -> Self {
        Self { extrap, q, ..Self::plain() }
    }

    fn validate(&self) -> Result<()> {
        if self.extrap != ExtrapChoice::None && self.q == 0 {
            return Err(Error::Config("restart length q must be at least 1".into()));
        }
        if self.tol <= 0.0 {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    /// Budget exhausted; the report carries the best iterate seen.
    MaxIter,
    /// Backtracking failed twice; the report carries the best iterate seen.
    LineSearchFailed,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Converged => write!(f, "converged"),
            SolveStatus::MaxIter => write!(f, "maxiter"),
            SolveStatus::LineSearchFailed => write!(f, "linesearch_failed"),
        }
    }
}

/// What produced a history sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Step,
    Extrap,
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepKind::Step => write!(f, "step"),
            StepKind::Extrap => write!(f, "extrap"),
        }
    }
}

/// One convergence-history sample. The initial state is recorded with a
/// NaN successive norm since no step preceded it.
#[derive(Debug, Clone)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub kind: StepKind,
    pub rel_successive_norm: f64,
    pub relative_error: Option<f64>,
}

/// Outcome of a solver run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: SolveStatus,
    /// Total inner stepper steps performed; extrapolations are free.
    pub iterations: usize,
    /// Completed extrapolation cycles.
    pub cycles: usize,
    pub final_x: Vec<f64>,
    /// ||x - x_true|| / ||x_true|| when the problem carries a sampled truth.
    pub relative_error: Option<f64>,
    pub wall_seconds: f64,
    pub history: Vec<HistoryEntry>,
}

/// ||x - reference|| / ||reference||.
pub fn relative_l2_error(x: &[f64], reference: &[f64]) -> f64 {
    let num: f64 = x
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    num / norm2(reference)
}

fn rel_successive(new: &[f64], old: &[f64]) -> f64 {
    let num: f64 = new
        .iter()
        .zip(old)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let den = norm2(old);
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// y - f(x).
fn residual_at(p: &(impl NllsProblem + ?Sized), x: &[f64]) -> Result<Vec<f64>> {
    let mut f = vec![0.0; p.n_residuals()];
    p.eval_f(x, &mut f)?;
    Ok(p.data().iter().zip(&f).map(|(y, fi)| y - fi).collect())
}

/// The least-squares objective g(x) = ||y - f(x)||².
pub fn objective(p: &(impl NllsProblem + ?Sized), x: &[f64]) -> Result<f64> {
    let r = residual_at(p, x)?;
    Ok(dot(&r, &r))
}

/// ∇g(x) = -2 J_f(x)ᵀ (y - f(x)).
pub fn gradient_of_g(p: &(impl NllsProblem + ?Sized), x: &[f64]) -> Result<Vec<f64>> {
    let r = residual_at(p, x)?;
    let mut out = vec![0.0; p.n_unknowns()];
    p.jac_transpose_apply(x, &r, &mut out)?;
    for v in out.iter_mut() {
        *v *= -2.0;
    }
    Ok(out)
}

fn armijo_from(
    p: &(impl NllsProblem + ?Sized),
    x: &[f64],
    d: &[f64],
    omega: f64,
    tau0: f64,
    max_halvings: u32,
    inner: f64,
    g0: f64,
) -> Result<(f64, f64)> {
    let mut tau = tau0;
    let mut trial = vec![0.0; x.len()];
    for _ in 0..max_halvings {
        for ((t, &xi), &di) in trial.iter_mut().zip(x).zip(d) {
            *t = xi + tau * di;
        }
        let g = objective(p, &trial)?;
        if g <= g0 - omega * tau * inner {
            return Ok((tau, g));
        }
        tau *= 0.5;
    }
    Err(Error::LineSearch(format!(
        "no step in [{:.3e}, {tau0:.3e}] gave sufficient decrease (g = {g0:.6e}, slope = {inner:.3e})",
        tau * 2.0
    )))
}

/// Returns the largest step tau ∈ {tau0, tau0/2, …} with
/// g(x + tau d) ≤ g(x) - omega · tau · `sufficient_decrease_inner`,
/// where the caller supplies ⟨H⁻¹∇g, ∇g⟩ for its preconditioner.
pub fn armijo_backtrack(
    p: &(impl NllsProblem + ?Sized),
    x: &[f64],
    d: &[f64],
    s: &StepperConfig,
    sufficient_decrease_inner: f64,
) -> Result<f64> {
    s.validate()?;
    let g0 = objective(p, x)?;
    armijo_from(p, x, d, s.omega, s.tau0, s.max_halvings, sufficient_decrease_inner, g0)
        .map(|(tau, _)| tau)
}

struct StepOutcome {
    x_next: Vec<f64>,
    tau: f64,
    g_next: f64,
}

fn floor_preconditioner(h: &mut [f64], floor: f64) {
    for v in h.iter_mut() {
        if v.abs() < floor {
            *v = if v.is_sign_negative() { -floor } else { floor };
        }
    }
}

fn step_detailed(
    p: &(impl NllsProblem + ?Sized),
    x: &[f64],
    s: &StepperConfig,
) -> Result<StepOutcome> {
    let r = residual_at(p, x)?;
    let g0 = dot(&r, &r);
    let mut grad = vec![0.0; p.n_unknowns()];
    p.jac_transpose_apply(x, &r, &mut grad)?;
    for v in grad.iter_mut() {
        *v *= -2.0;
    }

    let (d, inner) = match s.method {
        StepMethod::Gd => {
            let inner = dot(&grad, &grad);
            (grad.iter().map(|v| -v).collect::<Vec<_>>(), inner)
        }
        StepMethod::Pgd | StepMethod::Sgd => {
            let mut h = vec![0.0; p.n_unknowns()];
            match s.method {
                StepMethod::Pgd => p.jacobian_diag(x, &mut h)?,
                _ => p.jtj_diag(x, &mut h)?,
            }
            floor_preconditioner(&mut h, s.diag_floor);
            let d: Vec<f64> = grad.iter().zip(&h).map(|(g, hi)| -g / hi).collect();
            let inner = grad.iter().zip(&h).map(|(g, hi)| g * g / hi).sum();
            (d, inner)
        }
    };
    let (tau, g_next) = armijo_from(p, x, &d, s.omega, s.tau0, s.max_halvings, inner, g0)?;
    let x_next: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + tau * di).collect();
    Ok(StepOutcome { x_next, tau, g_next })
}

/// One stepper update: direction from the configured preconditioner,
/// step length from Armijo backtracking. Returns the new point and the
/// accepted step length.
pub fn step(
    p: &(impl NllsProblem + ?Sized),
    x: &[f64],
    s: &StepperConfig,
) -> Result<(Vec<f64>, f64)> {
    s.validate()?;
    let out = step_detailed(p, x, s)?;
    Ok((out.x_next, out.tau))
}

/// Runs up to `m` stepper steps from `x0` and collects the iterates,
/// starting point included. Stops early (returning `true`) once the
/// relative successive-iterate norm drops below `tol`.
pub fn fixed_point_window(
    p: &(impl NllsProblem + ?Sized),
    x0: &[f64],
    m: usize,
    s: &StepperConfig,
    tol: f64,
) -> Result<(SequenceWindow, bool)> {
    s.validate()?;
    if m == 0 {
        return Err(Error::Config("a window needs at least one step".into()));
    }
    let mut window = SequenceWindow::new(p.n_unknowns());
    let mut x = x0.to_vec();
    window.push(x.clone())?;
    for _ in 0..m {
        let out = step_detailed(p, &x, s)?;
        let rel = rel_successive(&out.x_next, &x);
        x = out.x_next;
        window.push(x.clone())?;
        if rel < tol {
            return Ok((window, true));
        }
    }
    Ok((window, false))
}

fn extrapolate_window(
    window: &SequenceWindow,
    choice: ExtrapChoice,
    cfg: &ExtrapConfig,
) -> Result<ExtrapolationOutcome> {
    match choice {
        ExtrapChoice::Rre => rre(window, cfg),
        ExtrapChoice::Mpe => mpe(window, cfg),
        ExtrapChoice::Vea => {
            // VEA consumes an odd number of vectors; trim a truncated
            // window to its most recent odd-length tail.
            if window.len() % 2 == 1 {
                vea(window, cfg)
            } else {
                vea(&window.tail(window.len() - 1)?, cfg)
            }
        }
        ExtrapChoice::None => unreachable!("no transform configured"),
    }
}

/// Restarted extrapolated descent. Per cycle the stepper produces a window
/// of q + 2 (RRE/MPE) or 2q + 1 (VEA) iterates including the cycle's
/// starting point; the window is extrapolated and the run stops once the
/// extrapolated vector agrees with the cycle's last iterate to `tol`
/// (relative l2), restarting from the extrapolated vector otherwise. With
/// `ExtrapChoice::None` this is the plain stepper loop under the
/// successive-iterate stopping rule.
///
/// Budget exhaustion and repeated line-search failure are reported through
/// [`RunReport::status`] with the best-objective iterate, not as errors.
pub fn restarted_solve(
    p: &(impl NllsProblem + ?Sized),
    x0: &[f64],
    stepper: &StepperConfig,
    solve: &SolveConfig,
) -> Result<RunReport> {
    stepper.validate()?;
    solve.validate()?;
    if x0.len() != p.n_unknowns() {
        return Err(Error::Dimension(format!(
            "start of length {} for a problem with {} unknowns",
            x0.len(),
            p.n_unknowns()
        )));
    }
    let clock = Instant::now();
    let rel_err = |x: &[f64]| p.x_true().map(|xt| relative_l2_error(x, xt));

    let mut cfg = *stepper;
    let mut x = x0.to_vec();
    let mut best_g = objective(p, &x)?;
    let mut best_x = x.clone();
    let mut iterations = 0usize;
    let mut cycles = 0usize;
    let mut failures = 0u32;
    let mut history = vec![HistoryEntry {
        iteration: 0,
        kind: StepKind::Step,
        rel_successive_norm: f64::NAN,
        relative_error: rel_err(&x),
    }];

    let steps_per_cycle = match solve.extrap {
        ExtrapChoice::None => None,
        ExtrapChoice::Rre | ExtrapChoice::Mpe => Some(solve.q + 1),
        ExtrapChoice::Vea => Some(2 * solve.q),
    };

    let (status, final_x) = 'run: loop {
        let mut window = SequenceWindow::new(p.n_unknowns());
        window.push(x.clone())?;
        let mut inner_converged = false;

        'window: loop {
            if let Some(m) = steps_per_cycle {
                if window.len() - 1 >= m {
                    break 'window;
                }
            }
            if iterations >= solve.itermax {
                // Salvage a truncated window before giving up: the
                // extrapolation may still be the best iterate seen.
                if steps_per_cycle.is_some() && window.len() >= 3 {
                    if let Ok(out) =
                        extrapolate_window(&window, solve.extrap, &solve.extrap_cfg)
                    {
                        cycles += 1;
                        let gap = rel_successive(&out.t, window.last());
                        history.push(HistoryEntry {
                            iteration: iterations,
                            kind: StepKind::Extrap,
                            rel_successive_norm: gap,
                            relative_error: rel_err(&out.t),
                        });
                        if objective(p, &out.t)? < best_g {
                            best_x = out.t;
                        }
                    }
                }
                break 'run (SolveStatus::MaxIter, best_x);
            }
            match step_detailed(p, &x, &cfg) {
                Ok(out) => {
                    iterations += 1;
                    let rel = rel_successive(&out.x_next, &x);
                    history.push(HistoryEntry {
                        iteration: iterations,
                        kind: StepKind::Step,
                        rel_successive_norm: rel,
                        relative_error: rel_err(&out.x_next),
                    });
                    if out.g_next < best_g {
                        best_g = out.g_next;
                        best_x = out.x_next.clone();
                    }
                    x = out.x_next;
                    window.push(x.clone())?;
                    if rel < solve.tol {
                        inner_converged = true;
                        break 'window;
                    }
                }
                Err(Error::LineSearch(reason)) => {
                    failures += 1;
                    if failures > 1 {
                        break 'run (SolveStatus::LineSearchFailed, best_x);
                    }
                    // One retry: restart the cycle from the best iterate
                    // with a tighter initial step.
                    let _ = reason;
                    cfg.tau0 *= 0.1;
                    x = best_x.clone();
                    continue 'run;
                }
                Err(e) => return Err(e),
            }
        }

        if steps_per_cycle.is_none() {
            // Plain loop: the window loop only exits on convergence here.
            break 'run (SolveStatus::Converged, x);
        }

        if window.len() < 3 {
            if inner_converged {
                break 'run (SolveStatus::Converged, x);
            }
            continue 'run;
        }

        match extrapolate_window(&window, solve.extrap, &solve.extrap_cfg) {
            Ok(out) => {
                cycles += 1;
                let gap = rel_successive(&out.t, window.last());
                history.push(HistoryEntry {
                    iteration: iterations,
                    kind: StepKind::Extrap,
                    rel_successive_norm: gap,
                    relative_error: rel_err(&out.t),
                });
                let g_t = objective(p, &out.t)?;
                if g_t < best_g {
                    best_g = g_t;
                    best_x = out.t.clone();
                }
                if gap < solve.tol {
                    break 'run (SolveStatus::Converged, out.t);
                }
                if inner_converged {
                    // The stepper's own stopping rule fired but the
                    // extrapolation disagrees with the converged iterate;
                    // keep the iterate.
                    break 'run (SolveStatus::Converged, x);
                }
                x = out.t;
            }
            Err(Error::Degenerate(_)) => {
                // No usable coefficients for this window; carry on from the
                // last stepper iterate.
                if inner_converged {
                    break 'run (SolveStatus::Converged, x);
                }
            }
            Err(e) => return Err(e),
        }
    };

    Ok(RunReport {
        status,
        iterations,
        cycles,
        relative_error: rel_err(&final_x),
        final_x,
        wall_seconds: clock.elapsed().as_secs_f64(),
        history,
    })
}

/// Gauss-Newton direction: a solution of the linearized least-squares
/// problem min ||r - J δ|| through the QR factorization of J. Wide
/// Jacobians get the basic solution (trailing unknowns pinned to zero),
/// either densely or through the sparse normal equations of the leading
/// square block.
fn gauss_newton_direction(
    p: &(impl NllsProblem + ?Sized),
    x: &[f64],
    r: &[f64],
) -> Result<Vec<f64>> {
    if let Some(jac) = p.jacobian_dense(x) {
        return least_squares_qr(&jac, r);
    }
    if let Some((diag, off)) = p.basic_gram_tridiag(x) {
        let m = diag.len();
        // J₁ᵀ r is the leading slice of Jᵀ r: dropping trailing columns
        // leaves the others untouched.
        let mut jtr = vec![0.0; p.n_unknowns()];
        p.jac_transpose_apply(x, r, &mut jtr)?;
        let mut delta = solve_tridiag_spd(&diag, &off, &jtr[..m])?;
        delta.resize(p.n_unknowns(), 0.0);
        return Ok(delta);
    }
    Err(Error::Unsupported(
        "gauss-newton needs a dense Jacobian or a banded Gram structure".into(),
    ))
}

/// Damped Gauss-Newton with the same stopping rule and report layout as
/// [`restarted_solve`]. Armijo constants are fixed at omega = 1e-4,
/// tau0 = 1.
pub fn gauss_newton_solve(
    p: &(impl NllsProblem + ?Sized),
    x0: &[f64],
    solve: &SolveConfig,
) -> Result<RunReport> {
    solve.validate()?;
    if x0.len() != p.n_unknowns() {
        return Err(Error::Dimension(format!(
            "start of length {} for a problem with {} unknowns",
            x0.len(),
            p.n_unknowns()
        )));
    }
    let clock = Instant::now();
    let rel_err = |x: &[f64]| p.x_true().map(|xt| relative_l2_error(x, xt));

    let mut x = x0.to_vec();
    let mut best_g = objective(p, &x)?;
    let mut best_x = x.clone();
    let mut iterations = 0usize;
    let mut history = vec![HistoryEntry {
        iteration: 0,
        kind: StepKind::Step,
        rel_successive_norm: f64::NAN,
        relative_error: rel_err(&x),
    }];

    let (status, final_x) = loop {
        if iterations >= solve.itermax {
            break (SolveStatus::MaxIter, best_x);
        }
        let r = residual_at(p, &x)?;
        let g0 = dot(&r, &r);
        let delta = gauss_newton_direction(p, &x, &r)?;
        let mut jtr = vec![0.0; p.n_unknowns()];
        p.jac_transpose_apply(&x, &r, &mut jtr)?;
        let inner = 2.0 * dot(&delta, &jtr);
        match armijo_from(p, &x, &delta, 1e-4, 1.0, 50, inner, g0) {
            Ok((tau, g_next)) => {
                let x_next: Vec<f64> =
                    x.iter().zip(&delta).map(|(xi, di)| xi + tau * di).collect();
                iterations += 1;
                let rel = rel_successive(&x_next, &x);
                history.push(HistoryEntry {
                    iteration: iterations,
                    kind: StepKind::Step,
                    rel_successive_norm: rel,
                    relative_error: rel_err(&x_next),
                });
                if g_next < best_g {
                    best_g = g_next;
                    best_x = x_next.clone();
                }
                x = x_next;
                if rel < solve.tol {
                    break (SolveStatus::Converged, x);
                }
            }
            Err(Error::LineSearch(_)) => break (SolveStatus::LineSearchFailed, best_x),
            Err(e) => return Err(e),
        }
    };

    Ok(RunReport {
        status,
        iterations,
        cycles: 0,
        relative_error: rel_err(&final_x),
        final_x,
        wall_seconds: clock.elapsed().as_secs_f64(),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::DenseMatrix;

    /// f(x) = A x + c against data y.
    struct LinearProblem {
        a: DenseMatrix,
        shift: Vec<f64>,
        y: Vec<f64>,
        x_true: Option<Vec<f64>>,
    }

    impl LinearProblem {
        fn new(a: DenseMatrix, y: Vec<f64>) -> Self {
            let shift = vec![0.0; a.rows()];
            Self { a, shift, y, x_true: None }
        }
    }

    impl NllsProblem for LinearProblem {
        fn n_unknowns(&self) -> usize {
            self.a.cols()
        }
        fn n_residuals(&self) -> usize {
            self.a.rows()
        }
        fn data(&self) -> &[f64] {
            &self.y
        }
        fn x_true(&self) -> Option<&[f64]> {
            self.x_true.as_deref()
        }
        fn eval_f(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
            let ax = self.a.apply(x);
            for ((o, a), s) in out.iter_mut().zip(&ax).zip(&self.shift) {
                *o = a + s;
            }
            Ok(())
        }
        fn jac_transpose_apply(&self, _x: &[f64], r: &[f64], out: &mut [f64]) -> Result<()> {
            for (j, o) in out.iter_mut().enumerate() {
                *o = dot(self.a.column(j), r);
            }
            Ok(())
        }
        fn jacobian_diag(&self, _x: &[f64], out: &mut [f64]) -> Result<()> {
            if self.a.rows() != self.a.cols() {
                return Err(Error::Shape("rectangular".into()));
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = self.a.get(j, j);
            }
            Ok(())
        }
        fn jtj_diag(&self, _x: &[f64], out: &mut [f64]) -> Result<()> {
            for (j, o) in out.iter_mut().enumerate() {
                let c = self.a.column(j);
                *o = dot(c, c);
            }
            Ok(())
        }
        fn jacobian_dense(&self, _x: &[f64]) -> Option<DenseMatrix> {
            Some(self.a.clone())
        }
    }

    fn scalar_square() -> LinearProblem {
        // g(x) = x²
        LinearProblem::new(
            DenseMatrix::from_columns(1, &[vec![1.0]]).unwrap(),
            vec![0.0],
        )
    }

    #[test]
    fn gradient_of_identity_problem_is_two_x() {
        let p = LinearProblem::new(
            DenseMatrix::from_columns(3, &[
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ])
            .unwrap(),
            vec![0.0; 3],
        );
        let g = gradient_of_g(&p, &[1.5, -2.0, 0.25]).unwrap();
        assert_eq!(g, vec![3.0, -4.0, 0.5]);
    }

    #[test]
    fn armijo_halves_once_on_the_parabola() {
        // x = 1, d = -2, omega = 1e-4: tau = 1 overshoots to g(-1) = 1,
        // tau = 1/2 lands on the minimum.
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let tau = armijo_backtrack(&p, &[1.0], &[-2.0], &s, 4.0).unwrap();
        assert_eq!(tau, 0.5);
    }

    #[test]
    fn armijo_accepts_zero_direction_immediately() {
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let tau = armijo_backtrack(&p, &[1.0], &[0.0], &s, 0.0).unwrap();
        assert_eq!(tau, s.tau0);
    }

    #[test]
    fn armijo_accepts_tiny_initial_step_on_descent_direction() {
        let p = scalar_square();
        let mut s = StepperConfig::new(StepMethod::Gd);
        s.tau0 = 1e-3;
        let tau = armijo_backtrack(&p, &[1.0], &[-2.0], &s, 4.0).unwrap();
        assert_eq!(tau, 1e-3);
    }

    #[test]
    fn gd_step_on_parabola_reaches_the_minimum() {
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let (x1, tau) = step(&p, &[1.0], &s).unwrap();
        assert_eq!(tau, 0.5);
        assert_eq!(x1, vec![0.0]);
    }

    #[test]
    fn pgd_equals_gd_under_identity_preconditioner() {
        let mut p = LinearProblem::new(
            DenseMatrix::from_columns(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            vec![0.3, -0.4],
        );
        p.shift = vec![1.0, 2.0]; // f = x + const keeps diag(J) = 1
        let x = [0.7, -0.1];
        let gd = step(&p, &x, &StepperConfig::new(StepMethod::Gd)).unwrap();
        let mut pgd_cfg = StepperConfig::new(StepMethod::Pgd);
        pgd_cfg.omega = 1e-4;
        let pgd = step(&p, &x, &pgd_cfg).unwrap();
        assert_eq!(gd.0, pgd.0);
    }

    #[test]
    fn pgd_is_rejected_on_rectangular_jacobians() {
        let p = LinearProblem::new(
            DenseMatrix::from_columns(1, &[vec![1.0], vec![1.0]]).unwrap(),
            vec![1.0],
        );
        let s = StepperConfig::new(StepMethod::Pgd);
        assert!(matches!(step(&p, &[0.0, 0.0], &s), Err(Error::Shape(_))));
    }

    #[test]
    fn preconditioner_floor_keeps_directions_finite() {
        let mut h = vec![0.0, 1e-20, -1e-20, 2.0];
        floor_preconditioner(&mut h, 1e-12);
        assert_eq!(h, vec![1e-12, 1e-12, -1e-12, 2.0]);
    }

    #[test]
    fn window_of_one_step_holds_two_vectors() {
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let (w, early) = fixed_point_window(&p, &[1.0], 1, &s, 1e-12).unwrap();
        assert_eq!(w.len(), 2);
        assert!(!early);
        assert_eq!(w.vector(1), &[0.0]);
    }

    #[test]
    fn window_stops_early_at_a_fixed_point() {
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let (w, early) = fixed_point_window(&p, &[0.0], 5, &s, 1e-8).unwrap();
        assert!(early);
        assert!(w.len() <= 2);
    }

    #[test]
    fn plain_run_with_no_budget_reports_maxiter() {
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let mut cfg = SolveConfig::plain();
        cfg.itermax = 0;
        let report = restarted_solve(&p, &[1.0], &s, &cfg).unwrap();
        assert_eq!(report.status, SolveStatus::MaxIter);
        assert_eq!(report.iterations, 0);
        assert_eq!(report.history.len(), 1);
    }

    #[test]
    fn run_from_a_fixed_point_stops_within_one_cycle() {
        let p = scalar_square();
        let s = StepperConfig::new(StepMethod::Gd);
        let cfg = SolveConfig::with_extrap(ExtrapChoice::Rre, 3);
        let report = restarted_solve(&p, &[0.0], &s, &cfg).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        assert!(report.iterations <= 1);
        assert!(report.cycles <= 1);
    }

    #[test]
    fn gauss_newton_solves_linear_problems_immediately() {
        let a = DenseMatrix::from_columns(2, &[vec![2.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let p = LinearProblem::new(a, vec![5.0, 2.0]);
        let report = gauss_newton_solve(&p, &[0.0, 0.0], &SolveConfig::plain()).unwrap();
        assert!((report.final_x[0] - 1.5).abs() < 1e-10);
        assert!((report.final_x[1] - 2.0).abs() < 1e-10);
        assert!(report.iterations <= 2);
    }

    /// f(x) = x² against y = 1, truth x = 1.
    struct ScalarSquareRoot;

    impl NllsProblem for ScalarSquareRoot {
        fn n_unknowns(&self) -> usize {
            1
        }
        fn n_residuals(&self) -> usize {
            1
        }
        fn data(&self) -> &[f64] {
            &[1.0]
        }
        fn x_true(&self) -> Option<&[f64]> {
            Some(&[1.0])
        }
        fn eval_f(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
            out[0] = x[0] * x[0];
            Ok(())
        }
        fn jac_transpose_apply(&self, x: &[f64], r: &[f64], out: &mut [f64]) -> Result<()> {
            out[0] = 2.0 * x[0] * r[0];
            Ok(())
        }
        fn jacobian_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
            out[0] = 2.0 * x[0];
            Ok(())
        }
        fn jtj_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
            out[0] = 4.0 * x[0] * x[0];
            Ok(())
        }
        fn jacobian_dense(&self, x: &[f64]) -> Option<DenseMatrix> {
            DenseMatrix::from_columns(1, &[vec![2.0 * x[0]]]).ok()
        }
    }

    #[test]
    fn gauss_newton_matches_newton_on_the_scalar_square() {
        // full steps are accepted here, so the iterates are the Newton
        // sequence on x² = 1 from 2: 1.25, 1.025, 1.0003048...
        let report = gauss_newton_solve(&ScalarSquareRoot, &[2.0], &SolveConfig::plain()).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        let mut newton = 2.0f64;
        for entry in report.history.iter().skip(1) {
            newton -= (newton * newton - 1.0) / (2.0 * newton);
            let expect_err = (newton - 1.0).abs();
            let got_err = entry.relative_error.unwrap();
            assert!(
                (got_err - expect_err).abs() <= 1e-12 * (1.0 + expect_err),
                "iterate error {got_err:.3e} against Newton {expect_err:.3e}"
            );
        }
        assert!((report.final_x[0] - 1.0).abs() < 1e-8);
    }
}
