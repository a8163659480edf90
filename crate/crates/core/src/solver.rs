//! The two interior iterations, step-size schedules, and trace recording.
//!
//! Starting from `x^0` strictly inside `C`, with `v^k`, `w^k` subgradients of
//! `g`, `h` at `x^k`:
//!
//! * **Alg1** (interior subgradient): `x^{k+1}` minimizes
//!   `lambda_k <v^k - w^k, z> + d(z, x^k)` over `C`, i.e. it solves
//!   `lambda_k (v^k - w^k) + grad1_d(x^{k+1}, x^k) = 0`.
//! * **Alg2** (proximal linearized): `x^{k+1}` minimizes
//!   `g(z) - <w^k, z - x^k> + (1/lambda_k) d(z, x^k)` over `C`; the vector
//!   `z^{k+1} := w^k - (1/lambda_k) grad1_d(x^{k+1}, x^k)` then satisfies
//!   `lambda_k (z^{k+1} - w^k) + grad1_d(x^{k+1}, x^k) = 0` by construction
//!   and is certified to be a subgradient of `g` at `x^{k+1}`.
//!
//! Every record keeps the quantities the runtime certificates consume:
//! `beta_k = <grad1_d(x^{k+1}, x^k), x^{k+1} - x^k>` (nonnegative by the
//! three-point inequality), `alpha_k = lambda_k/2 ||x^k - x^{k+1}||^2` for
//! Alg2, the stationarity residual of the step, and the running sum of step
//! sizes.
//!
//! Termination is by step norm or iteration budget; the asymptotic theory
//! drives the step norm to zero, which makes it the natural observable.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dcfun::DCProblem;
use crate::error::{Error, Result};
use crate::linalg;
use crate::proxdist::{DomainC, Kernel, ProxDistancePair};
use crate::sampling;

/// Which iteration generated a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Alg1,
    Alg2,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Alg1 => "alg1",
            Algo::Alg2 => "alg2",
        }
    }
}

/// Step-size rule; emitted values are clamped into `[lambda_minus, lambda_plus]`.
#[derive(Debug, Clone, PartialEq)]
pub enum StepRule {
    Constant(f64),
    Sequence(Vec<f64>),
}

/// Bounded step-size schedule `0 < lambda_minus <= lambda_k <= lambda_plus`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSchedule {
    rule: StepRule,
    lambda_minus: f64,
    lambda_plus: f64,
}

/// A scheduled step size; `clamped` flags entries that fell outside the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledLambda {
    pub value: f64,
    pub clamped: bool,
}

impl StepSchedule {
    /// Constant rule with bounds collapsed onto the value.
    pub fn constant(value: f64) -> Result<Self> {
        Self::new(StepRule::Constant(value), value, value)
    }

    pub fn new(rule: StepRule, lambda_minus: f64, lambda_plus: f64) -> Result<Self> {
        if !(lambda_minus > 0.0 && lambda_minus.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda_minus must be positive and finite, got {lambda_minus}"
            )));
        }
        if !(lambda_plus >= lambda_minus && lambda_plus.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need lambda_minus <= lambda_plus, got [{lambda_minus}, {lambda_plus}]"
            )));
        }
        match &rule {
            StepRule::Constant(v) => {
                if !(*v >= lambda_minus && *v <= lambda_plus) {
                    return Err(Error::InvalidArgument(format!(
                        "constant step {v} outside [{lambda_minus}, {lambda_plus}]"
                    )));
                }
            }
            StepRule::Sequence(seq) => {
                if seq.is_empty() {
                    return Err(Error::InvalidArgument("empty step sequence".into()));
                }
                if seq.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "step sequence entries must be finite".into(),
                    ));
                }
            }
        }
        Ok(Self {
            rule,
            lambda_minus,
            lambda_plus,
        })
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    /// Step size for iteration `k`. Sequences hold their last entry once
    /// exhausted; out-of-range entries are clamped and flagged.
    pub fn lambda_at(&self, k: usize) -> ScheduledLambda {
        let raw = match &self.rule {
            StepRule::Constant(v) => *v,
            StepRule::Sequence(seq) => seq[k.min(seq.len() - 1)],
        };
        let value = raw.max(self.lambda_minus).min(self.lambda_plus);
        ScheduledLambda {
            value,
            clamped: value != raw,
        }
    }

    pub fn describe(&self) -> String {
        match &self.rule {
            StepRule::Constant(v) => format!("constant({v})"),
            StepRule::Sequence(seq) => format!("sequence(len={})", seq.len()),
        }
    }
}

/// Finite-termination and inner-solve controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Stop once `||x^{k+1} - x^k|| <= step_tol`.
    pub step_tol: f64,
    /// Stationarity tolerance the recorded step must meet.
    pub inner_tol: f64,
    /// When set, subgradient selections and the Alg2 `z^{k+1}` vector are
    /// probe-certified every iteration.
    pub record_certificates: bool,
    /// Base seed for the per-iteration certification probes.
    pub probe_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            step_tol: 1e-10,
            inner_tol: 1e-8,
            record_certificates: true,
            probe_seed: sampling::DEFAULT_PROBE_SEED,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be positive".into()));
        }
        if !(self.step_tol >= 0.0 && self.step_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "step_tol must be finite and nonnegative, got {}",
                self.step_tol
            )));
        }
        if !(self.inner_tol >= 1e-14 && self.inner_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "inner_tol must be at least 1e-14, got {}",
                self.inner_tol
            )));
        }
        Ok(())
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Step norm fell below `step_tol`.
    StepTol,
    /// Iteration budget exhausted.
    MaxIter,
    /// A step left the interior and the single retry with a halved step size
    /// did not help.
    InfeasibleStep,
    /// Oracle contract violation or inner-solve failure.
    OracleError,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::StepTol => "step_tol",
            Termination::MaxIter => "max_iter",
            Termination::InfeasibleStep => "infeasible_step",
            Termination::OracleError => "oracle_error",
        }
    }

    /// Whether the run ended by one of the two regular stopping rules.
    pub fn is_regular(&self) -> bool {
        matches!(self, Termination::StepTol | Termination::MaxIter)
    }
}

/// One completed step `x^k -> x^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// The new iterate `x^{k+1}`.
    pub x: Vec<f64>,
    /// `f(x^{k+1})`.
    pub f_val: f64,
    /// Step size actually used (may differ from the schedule after an
    /// infeasible-step retry).
    pub lambda: f64,
    /// Whether the schedule clamped this entry into its bounds.
    pub lambda_clamped: bool,
    /// `<grad1_d(x^{k+1}, x^k), x^{k+1} - x^k>`.
    pub beta: f64,
    /// `lambda_k/2 ||x^k - x^{k+1}||^2`; recorded for Alg2, zero for Alg1.
    pub alpha: f64,
    pub step_norm: f64,
    /// Subgradient of `g` at `x^k` (Alg1) or of `g` at `x^{k+1}` via the
    /// optimality identity (Alg2 stores it in `z_next` instead).
    pub v: Vec<f64>,
    /// Subgradient of `h` at `x^k`.
    pub w: Vec<f64>,
    /// Alg2's certified subgradient of `g` at `x^{k+1}`.
    pub z_next: Option<Vec<f64>>,
    /// Sup-norm residual of the step's optimality condition.
    pub resid: f64,
    /// Running sum of used step sizes up to and including this one.
    pub sigma: f64,
}

/// Ordered record of a run, consumed by the certificates and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub algo: Algo,
    pub x0: Vec<f64>,
    pub f0: f64,
    pub records: Vec<IterationRecord>,
    pub termination: Termination,
    pub problem_id: String,
    pub distance_id: String,
    pub schedule_desc: String,
}

impl Trace {
    /// Number of completed steps.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_x(&self) -> &[f64] {
        self.records.last().map_or(&self.x0, |r| &r.x)
    }

    pub fn final_f(&self) -> f64 {
        self.records.last().map_or(self.f0, |r| r.f_val)
    }

    /// All iterates `x^0, ..., x^K`.
    pub fn iterates(&self) -> Vec<&[f64]> {
        core::iter::once(self.x0.as_slice())
            .chain(self.records.iter().map(|r| r.x.as_slice()))
            .collect()
    }

    /// Objective values `f(x^0), ..., f(x^K)`.
    pub fn f_values(&self) -> Vec<f64> {
        core::iter::once(self.f0)
            .chain(self.records.iter().map(|r| r.f_val))
            .collect()
    }
}

fn check_setup(p: &DCProblem, pair: &ProxDistancePair) -> Result<()> {
    if p.domain != *pair.domain() {
        return Err(Error::InvalidArgument(
            "problem and distance must share the same domain".into(),
        ));
    }
    Ok(())
}

/// One interior subgradient step from `x_k`.
pub fn alg1_step(
    p: &DCProblem,
    pair: &ProxDistancePair,
    x_k: &[f64],
    lambda_k: f64,
    config: &SolverConfig,
    k: usize,
) -> Result<IterationRecord> {
    check_setup(p, pair)?;
    pair.domain().check_interior(x_k)?;
    let (v, w) = if config.record_certificates {
        p.subgrad_pair_seeded(x_k, config.probe_seed.wrapping_add(k as u64))?
    } else {
        p.subgrad_pair_uncertified(x_k)?
    };
    let c = linalg::sub(&v, &w);
    let x_next = pair.kernel_map_inverse(x_k, &c, lambda_k)?;
    let grad = pair.grad1_d(&x_next, x_k)?;
    let resid = (0..c.len())
        .map(|i| (lambda_k * c[i] + grad[i]).abs())
        .fold(0.0, f64::max);
    if resid > config.inner_tol {
        return Err(Error::InnerSolve {
            residual: resid,
            iters: 0,
            tol: config.inner_tol,
        });
    }
    let diff = linalg::sub(&x_next, x_k);
    let beta = linalg::dot(&grad, &diff);
    let step_norm = linalg::norm2(&diff);
    let f_val = p.eval(&x_next)?;
    Ok(IterationRecord {
        k,
        x: x_next,
        f_val,
        lambda: lambda_k,
        lambda_clamped: false,
        beta,
        alpha: 0.0,
        step_norm,
        v,
        w,
        z_next: None,
        resid,
        sigma: 0.0,
    })
}

/// One proximal linearized step from `x_k`. Requires `g` smooth (Newton inner
/// solve) or `g` with quadratic structure under the squared-Euclidean kernel
/// (direct linear solve); other nonsmooth `g` is rejected.
pub fn alg2_step(
    p: &DCProblem,
    pair: &ProxDistancePair,
    x_k: &[f64],
    lambda_k: f64,
    config: &SolverConfig,
    k: usize,
) -> Result<IterationRecord> {
    check_setup(p, pair)?;
    pair.domain().check_interior(x_k)?;
    let w = p.h.subgrad(x_k);
    if config.record_certificates {
        p.h.certify_subgradient(
            x_k,
            &w,
            crate::dcfun::SUBGRAD_PROBES,
            config.probe_seed.wrapping_add(k as u64),
            crate::dcfun::SUBGRAD_PROBE_TOL,
            "subgrad of h",
        )?;
    }

    let closed_form = matches!(pair.kernel(), Kernel::SquaredEuclidean)
        && p.g.quadratic_form().is_some();
    let x_next = if closed_form {
        let q = p.g.quadratic_form().unwrap();
        let n = x_k.len();
        // (A + I/lambda) z = w - b + x/lambda
        let mut m = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut entry = q.a.get(i, j);
                if i == j {
                    entry += 1.0 / lambda_k;
                }
                m.push(entry);
            }
        }
        let rhs: Vec<f64> = (0..n)
            .map(|i| w[i] - q.b[i] + x_k[i] / lambda_k)
            .collect();
        let z = linalg::cholesky_solve(n, &m, &rhs).ok_or(Error::InnerSolve {
            residual: f64::INFINITY,
            iters: 0,
            tol: config.inner_tol,
        })?;
        pair.domain().check_interior(&z).map_err(|_| {
            Error::InfeasibleStep {
                reason: format!("proximal step leaves the interior at iteration {k}"),
            }
        })?;
        z
    } else if p.g.is_smooth() {
        newton_subproblem(p, pair, x_k, &w, lambda_k, config.inner_tol)?
    } else {
        return Err(Error::Unsupported(
            "algorithm 2 needs a smooth g (or quadratic g with the squared-Euclidean \
             distance); nonsmooth g has no reliable inner solve"
                .into(),
        ));
    };

    let grad_d = pair.grad1_d(&x_next, x_k)?;
    let grad_g = p.g.subgrad(&x_next);
    let resid = (0..x_k.len())
        .map(|i| (grad_g[i] - w[i] + grad_d[i] / lambda_k).abs())
        .fold(0.0, f64::max);
    if resid > config.inner_tol {
        return Err(Error::InnerSolve {
            residual: resid,
            iters: 0,
            tol: config.inner_tol,
        });
    }
    // z^{k+1} satisfies lambda (z - w) + grad1_d = 0 exactly by construction
    let z_next: Vec<f64> = (0..x_k.len())
        .map(|i| w[i] - grad_d[i] / lambda_k)
        .collect();
    if config.record_certificates {
        p.g.certify_subgradient(
            &x_next,
            &z_next,
            crate::dcfun::SUBGRAD_PROBES,
            config.probe_seed.wrapping_add(k as u64) ^ 0x5bd1_e995,
            1e-8,
            "z_next in subdiff of g",
        )?;
    }
    let diff = linalg::sub(&x_next, x_k);
    let beta = linalg::dot(&grad_d, &diff);
    let step_norm = linalg::norm2(&diff);
    let f_val = p.eval(&x_next)?;
    Ok(IterationRecord {
        k,
        x: x_next,
        f_val,
        lambda: lambda_k,
        lambda_clamped: false,
        beta,
        alpha: 0.5 * lambda_k * step_norm * step_norm,
        step_norm,
        v: grad_g,
        w,
        z_next: Some(z_next),
        resid,
        sigma: 0.0,
    })
}

/// Damped Newton on the smooth strictly convex subproblem
/// `Q(z) = g(z) - <w, z - y> + (1/lambda) d(z, y)`, with step halving to keep
/// iterates strictly interior. Falls back to per-coordinate safeguarded
/// bisection when the subproblem is separable.
fn newton_subproblem(
    p: &DCProblem,
    pair: &ProxDistancePair,
    y: &[f64],
    w: &[f64],
    lambda: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = y.len();
    let domain = pair.domain();
    let grad_q = |z: &[f64]| -> Result<Vec<f64>> {
        let gd = pair.grad1_d(z, y)?;
        let gg = p.g.subgrad(z);
        Ok((0..n).map(|i| gg[i] - w[i] + gd[i] / lambda).collect())
    };
    let obj_q = |z: &[f64]| -> f64 {
        match pair.eval_d(z, y) {
            Ok(d) => p.g.eval(z) - linalg::dot(w, &linalg::sub(z, y)) + d / lambda,
            Err(_) => f64::INFINITY,
        }
    };

    let mut z = y.to_vec();
    let max_inner = 100;
    let mut polish_done = false;
    let mut last_resid = f64::INFINITY;
    for _it in 0..max_inner {
        let grad = grad_q(&z)?;
        let resid = linalg::norm_inf(&grad);
        last_resid = resid;
        if resid <= tol && (polish_done || resid <= tol * 1e-3) {
            return Ok(z);
        }
        if resid <= tol {
            polish_done = true;
        }
        // Hessian: exact quadratic part when available, otherwise central
        // differences on the gradient; plus the separable kernel curvature.
        let dk = pair.diag_hess1_d(&z, y);
        let mut hess = Vec::with_capacity(n * n);
        if let Some(q) = p.g.quadratic_form() {
            for i in 0..n {
                for j in 0..n {
                    let mut e = q.a.get(i, j);
                    if i == j {
                        e += dk[i] / lambda;
                    }
                    hess.push(e);
                }
            }
        } else {
            let mut cols = Vec::with_capacity(n);
            for j in 0..n {
                let hstep = 1e-6 * z[j].abs().max(1.0);
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[j] += hstep;
                zm[j] -= hstep;
                let gp = p.g.subgrad(&zp);
                let gm = p.g.subgrad(&zm);
                cols.push(
                    (0..n)
                        .map(|i| (gp[i] - gm[i]) / (2.0 * hstep))
                        .collect::<Vec<f64>>(),
                );
            }
            for i in 0..n {
                for j in 0..n {
                    let mut e = 0.5 * (cols[j][i] + cols[i][j]);
                    if i == j {
                        e += dk[i] / lambda;
                    }
                    hess.push(e);
                }
            }
        }
        let neg = linalg::scale(&grad, -1.0);
        let dir = match linalg::cholesky_solve(n, &hess, &neg) {
            Some(d) => d,
            None => return separable_fallback(p, pair, y, w, lambda, tol),
        };
        // fraction to boundary, then Armijo backtracking on Q
        let mut t = max_interior_step(domain, &z, &dir);
        let q0 = obj_q(&z);
        let slope = linalg::dot(&grad, &dir);
        let mut accepted = false;
        for _ in 0..60 {
            let cand = linalg::axpy(&z, t, &dir);
            if domain.is_strictly_inside(&cand) && obj_q(&cand) <= q0 + 1e-4 * t * slope {
                z = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return separable_fallback(p, pair, y, w, lambda, tol);
        }
    }
    if last_resid <= tol {
        return Ok(z);
    }
    separable_fallback(p, pair, y, w, lambda, tol).map_err(|_| Error::InnerSolve {
        residual: last_resid,
        iters: max_inner,
        tol,
    })
}

/// Largest step along `dir` from interior `z` that stays safely interior
/// (capped at 1).
fn max_interior_step(domain: &DomainC, z: &[f64], dir: &[f64]) -> f64 {
    let mut t: f64 = 1.0;
    match domain {
        DomainC::AllSpace { .. } => {}
        DomainC::PositiveOrthant { .. } => {
            for i in 0..z.len() {
                if dir[i] < 0.0 {
                    t = t.min(0.9 * (-z[i] / dir[i]));
                }
            }
        }
        DomainC::OpenBox { lower, upper } => {
            for i in 0..z.len() {
                if dir[i] < 0.0 {
                    t = t.min(0.9 * ((lower[i] - z[i]) / dir[i]));
                } else if dir[i] > 0.0 {
                    t = t.min(0.9 * ((upper[i] - z[i]) / dir[i]));
                }
            }
        }
    }
    t.max(1e-300)
}

/// Per-coordinate safeguarded bisection on the stationarity equation, valid
/// when the subproblem separates (one-dimensional, or diagonal quadratic `g`).
fn separable_fallback(
    p: &DCProblem,
    pair: &ProxDistancePair,
    y: &[f64],
    w: &[f64],
    lambda: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = y.len();
    let diagonal_quadratic = p.g.quadratic_form().map(|q| {
        let mut diag = true;
        for i in 0..n {
            for j in 0..n {
                if i != j && q.a.get(i, j) != 0.0 {
                    diag = false;
                }
            }
        }
        diag
    });
    if n != 1 && diagonal_quadratic != Some(true) {
        return Err(Error::InnerSolve {
            residual: f64::INFINITY,
            iters: 0,
            tol,
        });
    }
    let mut z = y.to_vec();
    for i in 0..n {
        let psi = |t: f64| -> Result<f64> {
            let mut zz = z.clone();
            zz[i] = t;
            let gd = pair.grad1_d(&zz, y)?;
            let gg = p.g.subgrad(&zz);
            Ok(gg[i] - w[i] + gd[i] / lambda)
        };
        let (lo_bound, hi_bound) = coordinate_bounds(pair.domain(), y, i);
        let root = bisect_increasing(&psi, y[i], lo_bound, hi_bound)?;
        z[i] = root;
    }
    Ok(z)
}

fn coordinate_bounds(domain: &DomainC, y: &[f64], i: usize) -> (f64, f64) {
    match domain {
        DomainC::AllSpace { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        DomainC::PositiveOrthant { .. } => (0.0, f64::INFINITY),
        DomainC::OpenBox { lower, upper } => {
            let _ = y;
            (lower[i], upper[i])
        }
    }
}

/// Bisection for an increasing scalar function with geometric bracket
/// expansion from `start`, confined to the open interval `(lo, hi)`.
fn bisect_increasing(
    psi: &dyn Fn(f64) -> Result<f64>,
    start: f64,
    lo_bound: f64,
    hi_bound: f64,
) -> Result<f64> {
    let v0 = psi(start)?;
    if v0 == 0.0 {
        return Ok(start);
    }
    let scale = start.abs().max(1.0);
    let (mut lo, mut hi);
    if v0 > 0.0 {
        hi = start;
        // move toward the lower boundary until psi goes negative
        let mut step = 1e-3 * scale;
        lo = start;
        for _ in 0..200 {
            let cand = if lo_bound.is_finite() {
                lo_bound + 0.5 * (lo - lo_bound)
            } else {
                lo - step
            };
            step *= 2.0;
            lo = cand;
            if psi(lo)? < 0.0 {
                break;
            }
        }
        if psi(lo)? >= 0.0 {
            return Err(Error::InnerSolve {
                residual: f64::INFINITY,
                iters: 200,
                tol: 0.0,
            });
        }
    } else {
        lo = start;
        let mut step = 1e-3 * scale;
        hi = start;
        for _ in 0..200 {
            let cand = if hi_bound.is_finite() {
                hi_bound - 0.5 * (hi_bound - hi)
            } else {
                hi + step
            };
            step *= 2.0;
            hi = cand;
            if psi(hi)? > 0.0 {
                break;
            }
        }
        if psi(hi)? <= 0.0 {
            return Err(Error::InnerSolve {
                residual: f64::INFINITY,
                iters: 200,
                tol: 0.0,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Runs the chosen algorithm from `x0` until the step tolerance or iteration
/// budget is hit. Infeasible steps are retried once with a halved step size
/// (not below `lambda_minus`); step errors end the run with the matching
/// termination tag instead of being raised.
pub fn run(
    p: &DCProblem,
    pair: &ProxDistancePair,
    algo: Algo,
    x0: &[f64],
    schedule: &StepSchedule,
    config: &SolverConfig,
) -> Result<Trace> {
    config.validate()?;
    check_setup(p, pair)?;
    pair.domain().check_interior(x0)?;
    let f0 = p.eval(x0)?;

    let step = |x: &[f64], lambda: f64, k: usize| -> Result<IterationRecord> {
        match algo {
            Algo::Alg1 => alg1_step(p, pair, x, lambda, config, k),
            Algo::Alg2 => alg2_step(p, pair, x, lambda, config, k),
        }
    };

    let mut records: Vec<IterationRecord> = Vec::new();
    let mut x = x0.to_vec();
    let mut sigma = 0.0;
    let mut termination = Termination::MaxIter;
    for k in 0..config.max_iter {
        let sched = schedule.lambda_at(k);
        let outcome = match step(&x, sched.value, k) {
            Err(Error::InfeasibleStep { .. }) => {
                let halved = (0.5 * sched.value).max(schedule.lambda_minus());
                if halved < sched.value {
                    step(&x, halved, k)
                } else {
                    Err(Error::InfeasibleStep {
                        reason: "step size already at lambda_minus".into(),
                    })
                }
            }
            other => other,
        };
        match outcome {
            Ok(mut rec) => {
                sigma += rec.lambda;
                rec.sigma = sigma;
                rec.lambda_clamped = sched.clamped;
                x = rec.x.clone();
                let stop = rec.step_norm <= config.step_tol;
                records.push(rec);
                if stop {
                    termination = Termination::StepTol;
                    break;
                }
            }
            Err(Error::InfeasibleStep { .. }) => {
                termination = Termination::InfeasibleStep;
                break;
            }
            Err(_) => {
                termination = Termination::OracleError;
                break;
            }
        }
    }

    Ok(Trace {
        algo,
        x0: x0.to_vec(),
        f0,
        records,
        termination,
        problem_id: String::new(),
        distance_id: String::from(pair.kernel().name()),
        schedule_desc: schedule.describe(),
    })
}
