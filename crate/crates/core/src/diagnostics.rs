//! Runtime certificates for the inequalities behind the convergence theory,
//! criticality residuals, and independent brute-force/finite-difference
//! oracles.
//!
//! Certificates are read-only over traces. Each one reports a per-iteration
//! slack (inequality left side minus right side, oriented so that nonnegative
//! means "holds") and passes when the worst slack stays above `-tolerance`:
//!
//! * [`descent_certificate_alg1`]: with `h` strongly convex with modulus
//!   `rho` and `g` satisfying the `kappa` subdifferential condition,
//!   `f(x^k) - f(x^{k+1}) >= (rho - kappa) ||x^k - x^{k+1}||^2 + beta_k / lambda_k`.
//! * [`descent_certificate_alg2`]: same with `rho` in place of `rho - kappa`.
//! * [`beta_certificate`]: `beta_k >= 0` at every step, which the three-point
//!   inequality of the induced distance forces.
//! * [`monotone_certificate`]: plain `f(x^k) >= f(x^{k+1})`; expected to hold
//!   when `rho > kappa` (Alg1) or `rho > 0` (Alg2), and to fail honestly on
//!   configurations that violate those hypotheses.
//! * [`fejer_certificate`]: the quasi-Fejer inequality toward a declared
//!   critical point when `g` is strongly convex and `grad h` is Lipschitz.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dcfun::DCProblem;
use crate::error::{Error, Result};
use crate::linalg;
use crate::proxdist::{DomainC, ProxDistancePair};
use crate::sampling;
use crate::solver::{Algo, Trace};

/// Slack tolerance of the two descent certificates.
pub const DESCENT_TOL: f64 = 1e-9;
/// Slack tolerance of the beta certificate.
pub const BETA_TOL: f64 = 1e-12;
/// Slack tolerance of the Fejér certificate.
pub const FEJER_TOL: f64 = 1e-9;
/// Slack tolerance of the plain monotonicity certificate.
pub const MONOTONE_TOL: f64 = 1e-10;
/// Residual below which a point counts as criticality-certified.
pub const CRITICALITY_THRESHOLD: f64 = 1e-7;
/// Residual bound a declared critical point must meet before it is accepted
/// as the Fejér anchor.
pub const XBAR_GUARD_THRESHOLD: f64 = 1e-6;

/// Outcome of evaluating one inequality along a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub per_iteration_slack: Vec<f64>,
    pub min_slack: f64,
    pub passed: bool,
    pub tolerance: f64,
}

impl Certificate {
    fn from_slacks(name: &str, slacks: Vec<f64>, tolerance: f64) -> Self {
        let min_slack = slacks.iter().cloned().fold(f64::INFINITY, f64::min);
        let min_slack = if slacks.is_empty() { 0.0 } else { min_slack };
        Certificate {
            name: String::from(name),
            min_slack,
            passed: min_slack >= -tolerance,
            per_iteration_slack: slacks,
            tolerance,
        }
    }
}

/// Columnar view of the per-step data the scalar certificates consume:
/// objective values `f(x^0..x^K)` plus step size, `beta`, `alpha`, step norm,
/// and stationarity residual for each of the `K` steps. Reconstructable from
/// an emitted trace file, which is what keeps those certificates replayable.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSeries {
    pub f: Vec<f64>,
    pub lambda: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub step_norm: Vec<f64>,
    pub resid: Vec<f64>,
}

impl StepSeries {
    pub fn new(
        f: Vec<f64>,
        lambda: Vec<f64>,
        beta: Vec<f64>,
        alpha: Vec<f64>,
        step_norm: Vec<f64>,
        resid: Vec<f64>,
    ) -> Result<Self> {
        let k = lambda.len();
        if f.len() != k + 1
            || beta.len() != k
            || alpha.len() != k
            || step_norm.len() != k
            || resid.len() != k
        {
            return Err(Error::InvalidArgument(
                "step series columns have inconsistent lengths".into(),
            ));
        }
        Ok(Self {
            f,
            lambda,
            beta,
            alpha,
            step_norm,
            resid,
        })
    }

    pub fn from_trace(trace: &Trace) -> Self {
        Self {
            f: trace.f_values(),
            lambda: trace.records.iter().map(|r| r.lambda).collect(),
            beta: trace.records.iter().map(|r| r.beta).collect(),
            alpha: trace.records.iter().map(|r| r.alpha).collect(),
            step_norm: trace.records.iter().map(|r| r.step_norm).collect(),
            resid: trace.records.iter().map(|r| r.resid).collect(),
        }
    }

    pub fn steps(&self) -> usize {
        self.lambda.len()
    }
}

fn require_algo(trace: &Trace, want: Algo) -> Result<()> {
    if trace.algo != want {
        return Err(Error::InvalidArgument(format!(
            "certificate expects a trace from {}, got {}",
            want.name(),
            trace.algo.name()
        )));
    }
    Ok(())
}

/// Per-step descent slack for the interior subgradient iteration.
pub fn descent_certificate_alg1(trace: &Trace, rho: f64, kappa: f64) -> Result<Certificate> {
    require_algo(trace, Algo::Alg1)?;
    Ok(descent_certificate_alg1_series(
        &StepSeries::from_trace(trace),
        rho,
        kappa,
    ))
}

pub fn descent_certificate_alg1_series(s: &StepSeries, rho: f64, kappa: f64) -> Certificate {
    let slacks = (0..s.steps())
        .map(|k| {
            s.f[k] - s.f[k + 1]
                - (rho - kappa) * s.step_norm[k] * s.step_norm[k]
                - s.beta[k] / s.lambda[k]
        })
        .collect();
    Certificate::from_slacks("descent_alg1", slacks, DESCENT_TOL)
}

/// Per-step descent slack for the proximal linearized iteration.
pub fn descent_certificate_alg2(trace: &Trace, rho: f64) -> Result<Certificate> {
    require_algo(trace, Algo::Alg2)?;
    Ok(descent_certificate_alg2_series(
        &StepSeries::from_trace(trace),
        rho,
    ))
}

pub fn descent_certificate_alg2_series(s: &StepSeries, rho: f64) -> Certificate {
    let slacks = (0..s.steps())
        .map(|k| {
            s.f[k] - s.f[k + 1] - rho * s.step_norm[k] * s.step_norm[k] - s.beta[k] / s.lambda[k]
        })
        .collect();
    Certificate::from_slacks("descent_alg2", slacks, DESCENT_TOL)
}

/// `beta_k >= 0` for either algorithm.
pub fn beta_certificate(trace: &Trace) -> Certificate {
    beta_certificate_series(&StepSeries::from_trace(trace))
}

pub fn beta_certificate_series(s: &StepSeries) -> Certificate {
    Certificate::from_slacks("beta_nonnegative", s.beta.clone(), BETA_TOL)
}

/// Plain objective monotonicity `f(x^k) >= f(x^{k+1})`.
pub fn monotone_certificate(trace: &Trace) -> Certificate {
    monotone_certificate_series(&StepSeries::from_trace(trace))
}

pub fn monotone_certificate_series(s: &StepSeries) -> Certificate {
    let slacks = (0..s.steps()).map(|k| s.f[k] - s.f[k + 1]).collect();
    Certificate::from_slacks("monotone_descent", slacks, MONOTONE_TOL)
}

/// Numerical evidence for the summability claims: partial sums of squared
/// step norms and of `beta_k`, plus the fraction of the squared-step mass in
/// the final decile of the run (a small tail is what summable series show).
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityReport {
    pub sum_sq_steps: f64,
    pub sum_beta: f64,
    pub tail_ratio: f64,
}

pub fn summability_report(trace: &Trace) -> SummabilityReport {
    summability_report_series(&StepSeries::from_trace(trace))
}

pub fn summability_report_series(s: &StepSeries) -> SummabilityReport {
    let sq: Vec<f64> = s.step_norm.iter().map(|v| v * v).collect();
    let sum_sq_steps: f64 = sq.iter().sum();
    let sum_beta: f64 = s.beta.iter().sum();
    let n = sq.len();
    let tail_len = n.div_ceil(10);
    let tail: f64 = sq[n - tail_len.min(n)..].iter().sum();
    let tail_ratio = if sum_sq_steps > 0.0 {
        tail / sum_sq_steps
    } else {
        0.0
    };
    SummabilityReport {
        sum_sq_steps,
        sum_beta,
        tail_ratio,
    }
}

/// Quasi-Fejér certificate toward a declared critical point `x_bar`, for a
/// trace of either algorithm. Hypotheses: `g` strongly convex with modulus
/// `gamma`, `h` continuously differentiable with `lipschitz_l`-Lipschitz
/// gradient. Per step the slack is
///
/// ```text
/// Alg1:  H(xb, x^k) + beta_k  - H(xb, x^{k+1}) - lambda_k (gamma - L) ||x^k     - xb||^2
/// Alg2:  H(xb, x^k) + alpha_k - H(xb, x^{k+1}) - lambda_k (gamma - L - 1/2) ||x^{k+1} - xb||^2
/// ```
///
/// `x_bar` is checked against the criticality residual first; a point that
/// fails the check is rejected rather than silently anchoring the certificate.
pub fn fejer_certificate(
    p: &DCProblem,
    trace: &Trace,
    pair: &ProxDistancePair,
    x_bar: &[f64],
    gamma: f64,
    lipschitz_l: f64,
    guard_seed: u64,
) -> Result<Certificate> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the Fejér certificate needs g strongly convex (gamma > 0), got {gamma}"
        )));
    }
    if !(lipschitz_l >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lipschitz constant must be nonnegative, got {lipschitz_l}"
        )));
    }
    let resid = criticality_residual(p, x_bar, 200, 1.0, guard_seed)?;
    if resid > XBAR_GUARD_THRESHOLD {
        return Err(Error::InvalidArgument(format!(
            "x_bar fails the criticality check: residual {resid:e} > {XBAR_GUARD_THRESHOLD:e}"
        )));
    }
    let xs = trace.iterates();
    let mut h_vals = Vec::with_capacity(xs.len());
    for x in &xs {
        let h = pair.eval_h(x_bar, x)?;
        if !h.is_finite() {
            return Err(Error::InvalidArgument(
                "induced distance to x_bar is not finite along the trace".into(),
            ));
        }
        h_vals.push(h);
    }
    let slacks = (0..trace.len())
        .map(|k| {
            let rec = &trace.records[k];
            match trace.algo {
                Algo::Alg1 => {
                    let gap = linalg::dist2(xs[k], x_bar);
                    h_vals[k] + rec.beta
                        - h_vals[k + 1]
                        - rec.lambda * (gamma - lipschitz_l) * gap * gap
                }
                Algo::Alg2 => {
                    let gap = linalg::dist2(xs[k + 1], x_bar);
                    h_vals[k] + rec.alpha
                        - h_vals[k + 1]
                        - rec.lambda * (gamma - lipschitz_l - 0.5) * gap * gap
                }
            }
        })
        .collect();
    let name = match trace.algo {
        Algo::Alg1 => "fejer_alg1",
        Algo::Alg2 => "fejer_alg2",
    };
    Ok(Certificate::from_slacks(name, slacks, FEJER_TOL))
}

/// Sampled residual of the criticality variational inequality at `x`:
/// with `(v, w)` the oracle's subgradient selections,
///
/// ```text
/// max(0, -min over sampled feasible y of <v - w, y - x> / ||y - x||)
/// ```
///
/// where `y` ranges over deterministic axis probes, domain extreme points,
/// and `probes` random points of the radius ball around `x`, all projected
/// onto the domain closure. A residual at zero certifies the inequality
/// against the sampled directions only: it is a necessary check, sound for
/// the convex feasible sets shipped here.
pub fn criticality_residual(
    p: &DCProblem,
    x: &[f64],
    probes: usize,
    radius: f64,
    seed: u64,
) -> Result<f64> {
    if probes < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 probes, got {probes}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "probe radius must be positive, got {radius}"
        )));
    }
    p.domain.check_closure(x)?;
    let (v, w) = p.subgrad_pair_seeded(x, seed)?;
    let c = linalg::sub(&v, &w);
    let dim = x.len();

    let mut worst = f64::INFINITY;
    let mut consider = |y: &[f64]| {
        let diff = linalg::sub(y, x);
        let gap = linalg::norm2(&diff);
        if gap > 1e-14 {
            worst = worst.min(linalg::dot(&c, &diff) / gap);
        }
    };

    // axis probes
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut y = x.to_vec();
            y[i] += sign * radius;
            consider(&p.domain.project_to_closure(&y));
        }
    }
    // extreme points of the feasible set (origin for the orthant, corners for boxes)
    match &p.domain {
        DomainC::AllSpace { .. } => {}
        DomainC::PositiveOrthant { .. } => consider(&alloc::vec![0.0; dim]),
        DomainC::OpenBox { lower, upper } => {
            let corners = 1usize << dim.min(16);
            for mask in 0..corners {
                let y: Vec<f64> = (0..dim)
                    .map(|i| if mask >> i & 1 == 1 { upper[i] } else { lower[i] })
                    .collect();
                consider(&y);
            }
        }
    }
    // random ball samples
    let mut rng = sampling::rng(seed);
    for _ in 0..probes {
        let dir = sampling::unit_direction(&mut rng, dim);
        let t = sampling::uniform_in(&mut rng, 1e-3, 1.0);
        let y = linalg::axpy(x, radius * t, &dir);
        consider(&p.domain.project_to_closure(&y));
    }

    if worst == f64::INFINITY {
        // every probe collapsed onto x; nothing contradicts criticality
        return Ok(0.0);
    }
    Ok((-worst).max(0.0))
}

/// Exhaustive grid minimizer of `f` over an axis-aligned box inside the
/// domain closure. Independent oracle for the convergence tests; dimension
/// at most 3 and at most 401 nodes per axis.
pub fn brute_force_min(
    p: &DCProblem,
    box_lower: &[f64],
    box_upper: &[f64],
    resolution: usize,
) -> Result<(Vec<f64>, f64)> {
    let dim = p.dim();
    if dim > 3 {
        return Err(Error::Unsupported(format!(
            "grid search limited to dimension <= 3, got {dim}"
        )));
    }
    if !(2..=401).contains(&resolution) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be in [2, 401], got {resolution}"
        )));
    }
    if box_lower.len() != dim || box_upper.len() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: box_lower.len().min(box_upper.len()),
        });
    }
    if box_lower.iter().zip(box_upper).any(|(l, u)| !(l < u)) {
        return Err(Error::InvalidArgument(
            "grid box needs lower < upper per coordinate".into(),
        ));
    }
    p.domain.check_closure(box_lower)?;
    p.domain.check_closure(box_upper)?;

    let node = |i: usize, axis: usize| -> f64 {
        box_lower[axis]
            + (box_upper[axis] - box_lower[axis]) * (i as f64) / ((resolution - 1) as f64)
    };
    let mut idx = alloc::vec![0usize; dim];
    let mut best_x: Option<Vec<f64>> = None;
    let mut best_f = f64::INFINITY;
    loop {
        let x: Vec<f64> = (0..dim).map(|a| node(idx[a], a)).collect();
        let fx = p.eval(&x)?;
        if fx < best_f {
            best_f = fx;
            best_x = Some(x);
        }
        // lexicographic advance
        let mut axis = dim;
        while axis > 0 {
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < resolution {
                break;
            }
            idx[axis] = 0;
            if axis == 0 {
                return Ok((best_x.expect("nonempty grid"), best_f));
            }
        }
    }
}

/// Central-difference gradient of a scalar function; errors out when any
/// stencil value is non-finite (for example a barrier kernel evaluated past
/// its domain).
pub fn finite_diff_grad<F>(f: F, x: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + step;
        let fp = f(&probe);
        probe[i] = x[i] - step;
        let fm = f(&probe);
        probe[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFinite("finite_diff_grad"));
        }
        grad.push((fp - fm) / (2.0 * step));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcfun::ConvexOracle;
    use crate::linalg::SymMatrix;
    use crate::proxdist::ProxDistancePair;
    use crate::solver::{run, Algo, SolverConfig, StepSchedule};
    use alloc::vec;
    use alloc::vec::Vec;

    /// f = (x-2)^2/2 as g = x^2, h = x^2/2 + 2x - 2.
    fn quadratic_dc(domain: DomainC) -> DCProblem {
        let g = ConvexOracle::scaled_norm_sq(1, 2.0).unwrap();
        let h = ConvexOracle::quadratic(SymMatrix::diag(&[1.0]), vec![2.0], -2.0).unwrap();
        DCProblem::new(g, h, domain).unwrap()
    }

    fn run_alg2_quadratic(iters: usize) -> (DCProblem, Trace) {
        let p = quadratic_dc(DomainC::all_space(1).unwrap());
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        let cfg = SolverConfig {
            max_iter: iters,
            step_tol: 0.0,
            ..SolverConfig::default()
        };
        let t = run(
            &p,
            &pair,
            Algo::Alg2,
            &[5.0],
            &StepSchedule::constant(0.4).unwrap(),
            &cfg,
        )
        .unwrap();
        (p, t)
    }

    fn fixed_point_trace() -> Trace {
        let g = ConvexOracle::scaled_norm_sq(1, 1.0).unwrap();
        let h = ConvexOracle::scaled_norm_sq(1, 1.0).unwrap();
        let p = DCProblem::new(g, h, DomainC::all_space(1).unwrap()).unwrap();
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        run(
            &p,
            &pair,
            Algo::Alg1,
            &[1.0],
            &StepSchedule::constant(1.0).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn fixed_point_slacks_vanish() {
        let t = fixed_point_trace();
        let c = descent_certificate_alg1(&t, 1.0, 1.0).unwrap();
        assert_eq!(c.per_iteration_slack, vec![0.0]);
        assert!(c.passed);
        let s = summability_report(&t);
        assert_eq!(s.sum_sq_steps, 0.0);
        assert_eq!(s.sum_beta, 0.0);
        assert_eq!(s.tail_ratio, 0.0);
    }

    #[test]
    fn alg1_descent_certificate_holds_even_with_rho_below_kappa() {
        // rho = 1, kappa = 2: the inequality still holds, only monotonicity
        // guarantees would need rho > kappa
        let p = quadratic_dc(DomainC::all_space(1).unwrap());
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        let cfg = SolverConfig {
            max_iter: 100,
            ..SolverConfig::default()
        };
        let t = run(
            &p,
            &pair,
            Algo::Alg1,
            &[5.0],
            &StepSchedule::constant(0.2).unwrap(),
            &cfg,
        )
        .unwrap();
        let c = descent_certificate_alg1(&t, 1.0, 2.0).unwrap();
        // exact arithmetic gives slack >= 0; rounding in f near convergence
        // is why the certificate tolerance exists
        assert!(c.passed, "min slack {:e}", c.min_slack);
        assert!(c.min_slack >= -1e-12);
        assert!(beta_certificate(&t).passed);
    }

    #[test]
    fn alg1_certificate_rejects_alg2_trace() {
        let (_, t) = run_alg2_quadratic(10);
        assert!(descent_certificate_alg1(&t, 1.0, 2.0).is_err());
    }

    #[test]
    fn alg2_descent_certificate_and_overstated_rho() {
        let (_, t) = run_alg2_quadratic(200);
        let ok = descent_certificate_alg2(&t, 1.0).unwrap();
        assert!(ok.passed, "min slack {:e}", ok.min_slack);
        // overstating the modulus must be caught
        let bad = descent_certificate_alg2(&t, 10.0).unwrap();
        assert!(!bad.passed);
        assert!(bad.min_slack < 0.0);
    }

    #[test]
    fn adversarial_trace_with_inflated_f_fails() {
        let mut t = fixed_point_trace();
        t.records[0].f_val += 1.0; // pretend the objective went up
        let c = descent_certificate_alg1(&t, 1.0, 1.0).unwrap();
        assert!(!c.passed);
        assert!(c.min_slack <= -1.0 + 1e-12);
    }

    #[test]
    fn summability_tail_is_small_for_linear_convergence() {
        let (_, t) = run_alg2_quadratic(200);
        let s = summability_report(&t);
        assert!(s.sum_sq_steps.is_finite());
        assert!(s.tail_ratio <= 0.05, "tail ratio {}", s.tail_ratio);
    }

    #[test]
    fn summability_tail_flags_constant_steps() {
        // hand-built series with constant steps: the tail holds ~10% of the mass
        let k = 100;
        let s = StepSeries::new(
            vec![0.0; k + 1],
            vec![1.0; k],
            vec![0.0; k],
            vec![0.0; k],
            vec![1.0; k],
            vec![0.0; k],
        )
        .unwrap();
        let r = summability_report_series(&s);
        assert!((r.tail_ratio - 0.1).abs() < 1e-12);
    }

    #[test]
    fn fejer_certificate_holds_in_the_contraction_regime() {
        // gamma = 2, L = 1, gamma > L + 1/2
        let (p, t) = run_alg2_quadratic(200);
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        let c = fejer_certificate(&p, &t, &pair, &[2.0], 2.0, 1.0, 0).unwrap();
        assert!(c.passed, "min slack {:e}", c.min_slack);
    }

    #[test]
    fn fejer_certificate_rejects_noncritical_anchor() {
        let (p, t) = run_alg2_quadratic(50);
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        let err = fejer_certificate(&p, &t, &pair, &[0.0], 2.0, 1.0, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn criticality_residual_examples() {
        // interior critical point
        let p = quadratic_dc(DomainC::all_space(1).unwrap());
        assert!(criticality_residual(&p, &[2.0], 200, 1.0, 0).unwrap() <= 1e-12);
        // interior non-critical point: residual = |f'(1)| = 1
        let r = criticality_residual(&p, &[1.0], 200, 1.0, 0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        // boundary of the orthant: v - w = -2, the feasible cone points up
        let p = quadratic_dc(DomainC::positive_orthant(1).unwrap());
        let r = criticality_residual(&p, &[0.0], 200, 1.0, 0).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn criticality_residual_validates_inputs() {
        let p = quadratic_dc(DomainC::all_space(1).unwrap());
        assert!(criticality_residual(&p, &[2.0], 50, 1.0, 0).is_err());
        assert!(criticality_residual(&p, &[2.0], 200, -1.0, 0).is_err());
    }

    #[test]
    fn brute_force_grid_examples() {
        let p = quadratic_dc(DomainC::all_space(1).unwrap());
        let (x, _) = brute_force_min(&p, &[0.0], &[5.0], 401).unwrap();
        assert!((x[0] - 2.0).abs() <= 0.0125 + 1e-12);

        // f == 0 returns the first grid node
        let z = DCProblem::new(
            ConvexOracle::scaled_norm_sq(1, 1.0).unwrap(),
            ConvexOracle::scaled_norm_sq(1, 1.0).unwrap(),
            DomainC::all_space(1).unwrap(),
        )
        .unwrap();
        let (x, f) = brute_force_min(&z, &[-1.0], &[1.0], 11).unwrap();
        assert_eq!(x, vec![-1.0]);
        assert_eq!(f, 0.0);
    }

    #[test]
    fn brute_force_2d_nonsmooth() {
        // g = ||x||^2/2, h = max(x1 + x2, 0) on [0,3]^2: minimum at (1,1)
        let g = ConvexOracle::scaled_norm_sq(2, 1.0).unwrap();
        let h = ConvexOracle::affine_max(vec![vec![1.0, 1.0], vec![0.0, 0.0]], vec![0.0, 0.0])
            .unwrap();
        let p = DCProblem::new(g, h, DomainC::positive_orthant(2).unwrap()).unwrap();
        let (x, f) = brute_force_min(&p, &[0.0, 0.0], &[3.0, 3.0], 151).unwrap();
        assert!((x[0] - 1.0).abs() <= 0.02 + 1e-12);
        assert!((x[1] - 1.0).abs() <= 0.02 + 1e-12);
        assert!((f - (-1.0)).abs() <= 1e-3);
    }

    #[test]
    fn brute_force_validates_box() {
        let p = quadratic_dc(DomainC::positive_orthant(1).unwrap());
        assert!(brute_force_min(&p, &[-1.0], &[1.0], 11).is_err());
        assert!(brute_force_min(&p, &[0.0], &[1.0], 500).is_err());
    }

    #[test]
    fn finite_diff_gradient_of_quadratic() {
        let fd = finite_diff_grad(|x| 0.5 * (x[0] * x[0] + x[1] * x[1]), &[1.0, 2.0], 1e-6)
            .unwrap();
        assert!((fd[0] - 1.0).abs() < 1e-8);
        assert!((fd[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn finite_diff_errors_on_barrier_overstep() {
        // step larger than the distance to the boundary of the burg kernel
        let pair = ProxDistancePair::burg(1).unwrap();
        let err = finite_diff_grad(
            |x| pair.eval_d(x, &[1.0]).unwrap_or(f64::INFINITY),
            &[1e-7],
            1e-6,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn finite_diff_is_the_oracle_for_grad1_d() {
        let pair = ProxDistancePair::boltzmann_shannon(1).unwrap();
        let y = vec![1.0];
        let fd = finite_diff_grad(
            |x| pair.eval_d(x, &y).unwrap(),
            &[2.0],
            1e-6,
        )
        .unwrap();
        let an = pair.grad1_d(&[2.0], &y).unwrap();
        assert!((fd[0] - an[0]).abs() <= 1e-5 * an[0].abs().max(1.0));
    }

    #[test]
    fn descent_certificate_is_tight_at_half_the_curvature() {
        // affine g (kappa = 0) and quadratic h make every estimate in the
        // descent bound an equality, which pins the largest admissible rho
        // at half the curvature of h: rho = 1 passes, rho = 2 must fail.
        let g = ConvexOracle::quadratic(SymMatrix::diag(&[0.0]), vec![2.0], 0.0).unwrap();
        let h = ConvexOracle::scaled_norm_sq(1, 2.0).unwrap(); // x^2, curvature 2
        let domain = DomainC::open_box(vec![0.0], vec![4.0]).unwrap();
        let p = DCProblem::new(g, h, domain.clone()).unwrap();
        let pair = ProxDistancePair::new(crate::proxdist::Kernel::SquaredEuclidean, domain)
            .unwrap();
        let t = run(
            &p,
            &pair,
            Algo::Alg1,
            &[0.6],
            &StepSchedule::new(crate::solver::StepRule::Constant(0.1), 0.05, 0.1).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(t.len() >= 3);
        let at_half = descent_certificate_alg1(&t, 1.0, 0.0).unwrap();
        assert!(at_half.passed, "min slack {:e}", at_half.min_slack);
        let at_full = descent_certificate_alg1(&t, 2.0, 0.0).unwrap();
        assert!(!at_full.passed, "min slack {:e}", at_full.min_slack);
    }

    #[test]
    fn fejer_rejects_non_strongly_convex_gamma() {
        let (p, t) = run_alg2_quadratic(20);
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        assert!(fejer_certificate(&p, &t, &pair, &[2.0], 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn descent_slacks_invariant_under_constant_shift() {
        // adding the same constant to g and h leaves f and the slacks unchanged
        let build = |shift: f64| {
            let g = ConvexOracle::quadratic(SymMatrix::diag(&[2.0]), vec![0.0], shift).unwrap();
            let h = ConvexOracle::quadratic(SymMatrix::diag(&[1.0]), vec![2.0], -2.0 + shift)
                .unwrap();
            let p = DCProblem::new(g, h, DomainC::all_space(1).unwrap()).unwrap();
            let pair = ProxDistancePair::squared_euclidean(1).unwrap();
            let cfg = SolverConfig {
                max_iter: 50,
                ..SolverConfig::default()
            };
            run(
                &p,
                &pair,
                Algo::Alg1,
                &[5.0],
                &StepSchedule::constant(0.2).unwrap(),
                &cfg,
            )
            .unwrap()
        };
        let a = descent_certificate_alg1(&build(0.0), 1.0, 2.0).unwrap();
        let b = descent_certificate_alg1(&build(10.0), 1.0, 2.0).unwrap();
        let diffs: Vec<f64> = a
            .per_iteration_slack
            .iter()
            .zip(&b.per_iteration_slack)
            .map(|(x, y)| (x - y).abs())
            .collect();
        assert!(diffs.iter().all(|d| *d < 1e-9), "max diff {:?}", diffs.iter().cloned().fold(0.0, f64::max));
    }
}
