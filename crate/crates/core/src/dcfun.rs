//! Convex-function oracles and DC problem assembly `f = g - h`.
//!
//! An oracle exposes a value and one subgradient selection per point plus the
//! regularity constants the convergence certificates consume: a strong
//! convexity modulus, an optional gradient Lipschitz constant for smooth
//! functions, and an optional Lipschitz-like constant `kappa` bounding how
//! fast the whole subdifferential can move:
//!
//! ```text
//! subdiff g(x)  is contained in  subdiff g(y) + kappa ||x - y|| B
//! ```
//!
//! Oracles are certified at use sites by probing the subgradient inequality
//! at random points rather than trusted blindly; a failing probe aborts the
//! run instead of silently corrupting the descent estimates.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, SymMatrix};
use crate::proxdist::DomainC;
use crate::sampling;

type EvalFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type SubgradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Explicit quadratic structure `1/2 x'Ax + b'x + c`, kept alongside the
/// callables so subproblem solvers can use exact Hessians and closed forms.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub a: SymMatrix,
    pub b: Vec<f64>,
    pub c: f64,
}

/// Value + subgradient contract for a finite convex function on all of R^n.
pub struct ConvexOracle {
    dim: usize,
    eval: EvalFn,
    subgrad: SubgradFn,
    strong_convexity_modulus: f64,
    grad_lipschitz: Option<f64>,
    is_smooth: bool,
    subdiff_lipschitz: Option<f64>,
    quadratic: Option<QuadraticForm>,
    label: String,
}

impl core::fmt::Debug for ConvexOracle {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ConvexOracle")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("modulus", &self.strong_convexity_modulus)
            .field("grad_lipschitz", &self.grad_lipschitz)
            .field("is_smooth", &self.is_smooth)
            .field("subdiff_lipschitz", &self.subdiff_lipschitz)
            .finish()
    }
}

impl ConvexOracle {
    /// `1/2 x'Ax + b'x + c` with `A` symmetric positive semidefinite.
    /// Modulus and curvature constants come from the eigenvalue range of `A`.
    pub fn quadratic(a: SymMatrix, b: Vec<f64>, c: f64) -> Result<Self> {
        let dim = a.dim();
        if b.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: b.len(),
            });
        }
        let (lo, hi) = a.eigen_extremes();
        if lo < -1e-9 * hi.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "quadratic oracle needs a positive semidefinite matrix (min eigenvalue {lo:e})"
            )));
        }
        let modulus = lo.max(0.0);
        let a_eval = a.clone();
        let b_eval = b.clone();
        let a_grad = a.clone();
        let b_grad = b.clone();
        Ok(Self {
            dim,
            eval: Box::new(move |x| 0.5 * linalg::dot(x, &a_eval.matvec(x)) + linalg::dot(&b_eval, x) + c),
            subgrad: Box::new(move |x| linalg::add(&a_grad.matvec(x), &b_grad)),
            strong_convexity_modulus: modulus,
            grad_lipschitz: Some(hi.max(0.0)),
            is_smooth: true,
            subdiff_lipschitz: Some(hi.max(0.0)),
            quadratic: Some(QuadraticForm { a, b, c }),
            label: String::from("quadratic"),
        })
    }

    /// `mu/2 ||x||^2`.
    pub fn scaled_norm_sq(dim: usize, mu: f64) -> Result<Self> {
        if mu < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "scaled_norm_sq needs mu >= 0, got {mu}"
            )));
        }
        let mut o = Self::quadratic(SymMatrix::scaled_identity(dim, mu), alloc::vec![0.0; dim], 0.0)?;
        o.label = String::from("scaled_norm_sq");
        Ok(o)
    }

    pub fn zero(dim: usize) -> Self {
        Self::scaled_norm_sq(dim, 0.0).expect("zero oracle")
    }

    /// `max_i (a_i'x + b_i)`; the subgradient picks the row of the smallest
    /// attaining index, so traces are deterministic at ties.
    pub fn affine_max(rows: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if rows.is_empty() || rows.len() != offsets.len() {
            return Err(Error::InvalidArgument(format!(
                "affine_max needs matching nonempty rows/offsets ({} vs {})",
                rows.len(),
                offsets.len()
            )));
        }
        let dim = rows[0].len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument(
                "affine_max rows must share a positive dimension".into(),
            ));
        }
        let rows_eval = rows.clone();
        let offs_eval = offsets.clone();
        let argmax = move |x: &[f64]| -> usize {
            let mut best = 0;
            let mut best_v = linalg::dot(&rows_eval[0], x) + offs_eval[0];
            for (i, r) in rows_eval.iter().enumerate().skip(1) {
                let v = linalg::dot(r, x) + offs_eval[i];
                if v > best_v {
                    best_v = v;
                    best = i;
                }
            }
            best
        };
        let rows_g = rows.clone();
        let argmax_g = argmax.clone();
        let rows_e = rows;
        let offs_e = offsets;
        Ok(Self {
            dim,
            eval: Box::new(move |x| {
                rows_e
                    .iter()
                    .zip(&offs_e)
                    .map(|(r, o)| linalg::dot(r, x) + o)
                    .fold(f64::NEG_INFINITY, f64::max)
            }),
            subgrad: Box::new(move |x| rows_g[argmax_g(x)].clone()),
            strong_convexity_modulus: 0.0,
            grad_lipschitz: None,
            is_smooth: false,
            subdiff_lipschitz: None,
            quadratic: None,
            label: String::from("affine_max"),
        })
    }

    /// Sum of two oracles; values, subgradients, moduli, and curvature
    /// constants are all additive.
    pub fn sum(lhs: ConvexOracle, rhs: ConvexOracle) -> Result<Self> {
        if lhs.dim != rhs.dim {
            return Err(Error::DimMismatch {
                expected: lhs.dim,
                got: rhs.dim,
            });
        }
        let dim = lhs.dim;
        let opt_add = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        let quadratic = match (&lhs.quadratic, &rhs.quadratic) {
            (Some(p), Some(q)) => Some(QuadraticForm {
                a: p.a.add(&q.a)?,
                b: linalg::add(&p.b, &q.b),
                c: p.c + q.c,
            }),
            _ => None,
        };
        let label = format!("{}+{}", lhs.label, rhs.label);
        let grad_lipschitz = opt_add(lhs.grad_lipschitz, rhs.grad_lipschitz);
        let subdiff_lipschitz = opt_add(lhs.subdiff_lipschitz, rhs.subdiff_lipschitz);
        let modulus = lhs.strong_convexity_modulus + rhs.strong_convexity_modulus;
        let is_smooth = lhs.is_smooth && rhs.is_smooth;
        let (le, ls) = (lhs.eval, lhs.subgrad);
        let (re, rs) = (rhs.eval, rhs.subgrad);
        Ok(Self {
            dim,
            eval: Box::new(move |x| le(x) + re(x)),
            subgrad: Box::new(move |x| linalg::add(&ls(x), &rs(x))),
            strong_convexity_modulus: modulus,
            grad_lipschitz,
            is_smooth,
            subdiff_lipschitz,
            quadratic,
            label,
        })
    }

    /// Wraps user-supplied callables. The constants are declarations; the
    /// probe certification at use sites is what actually guards them.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        dim: usize,
        eval: EvalFn,
        subgrad: SubgradFn,
        strong_convexity_modulus: f64,
        grad_lipschitz: Option<f64>,
        is_smooth: bool,
        subdiff_lipschitz: Option<f64>,
    ) -> Self {
        Self {
            dim,
            eval,
            subgrad,
            strong_convexity_modulus,
            grad_lipschitz,
            is_smooth,
            subdiff_lipschitz,
            quadratic: None,
            label: String::from("custom"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval)(x)
    }

    pub fn subgrad(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (self.subgrad)(x)
    }

    pub fn strong_convexity_modulus(&self) -> f64 {
        self.strong_convexity_modulus
    }

    pub fn grad_lipschitz(&self) -> Option<f64> {
        self.grad_lipschitz
    }

    pub fn is_smooth(&self) -> bool {
        self.is_smooth
    }

    pub fn subdiff_lipschitz(&self) -> Option<f64> {
        self.subdiff_lipschitz
    }

    pub fn quadratic_form(&self) -> Option<&QuadraticForm> {
        self.quadratic.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Checks the subgradient inequality `f(y) >= f(x) + <s, y - x>` at
    /// `probes` random points around `x`. Slack below `-tol` is an oracle
    /// contract violation.
    pub fn certify_subgradient(
        &self,
        x: &[f64],
        s: &[f64],
        probes: usize,
        seed: u64,
        tol: f64,
        check: &'static str,
    ) -> Result<()> {
        if s.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: s.len(),
            });
        }
        let fx = self.eval(x);
        let mut rng = sampling::rng(seed);
        for p in 0..probes {
            let dir = sampling::unit_direction(&mut rng, self.dim);
            let r = sampling::uniform_in(&mut rng, 0.25, 1.5);
            let y = linalg::axpy(x, r, &dir);
            let slack = self.eval(&y) - fx - linalg::dot(s, &linalg::sub(&y, x));
            if slack < -tol {
                return Err(Error::OracleContract {
                    check,
                    slack,
                    probe: p,
                });
            }
        }
        Ok(())
    }
}

/// Probe tolerance for subgradient certification of `v` and `w`.
pub const SUBGRAD_PROBE_TOL: f64 = 1e-10;
/// Number of probe points per subgradient certification.
pub const SUBGRAD_PROBES: usize = 20;

/// A DC problem `f = g - h` over the closure of the domain, with optional
/// ground truth carried by shipped test instances.
#[derive(Debug)]
pub struct DCProblem {
    pub g: ConvexOracle,
    pub h: ConvexOracle,
    pub domain: DomainC,
    /// Global minimizer over the domain closure, when known by construction.
    pub known_minimizer: Option<Vec<f64>>,
    /// Points whose criticality residual the shipped tests pin to zero.
    pub known_critical_points: Vec<Vec<f64>>,
}

impl DCProblem {
    pub fn new(g: ConvexOracle, h: ConvexOracle, domain: DomainC) -> Result<Self> {
        if g.dim() != h.dim() {
            return Err(Error::DimMismatch {
                expected: g.dim(),
                got: h.dim(),
            });
        }
        if g.dim() != domain.dim() {
            return Err(Error::DimMismatch {
                expected: domain.dim(),
                got: g.dim(),
            });
        }
        Ok(Self {
            g,
            h,
            domain,
            known_minimizer: None,
            known_critical_points: Vec::new(),
        })
    }

    pub fn with_known_minimizer(mut self, x: Vec<f64>) -> Self {
        self.known_minimizer = Some(x);
        self
    }

    pub fn with_known_critical_points(mut self, pts: Vec<Vec<f64>>) -> Self {
        self.known_critical_points = pts;
        self
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// `f(x) = g(x) - h(x)` for `x` in the closure of the domain.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.domain.check_closure(x)?;
        Ok(self.g.eval(x) - self.h.eval(x))
    }

    /// One subgradient of each component at `x`, certified by probing the
    /// subgradient inequality. The oracles are finite convex on all of R^n,
    /// so selections exist on the closure boundary as well, which the
    /// criticality residual relies on.
    pub fn subgrad_pair(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.subgrad_pair_seeded(x, sampling::DEFAULT_PROBE_SEED)
    }

    pub fn subgrad_pair_seeded(&self, x: &[f64], seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.domain.check_dim(x)?;
        let v = self.g.subgrad(x);
        let w = self.h.subgrad(x);
        self.g
            .certify_subgradient(x, &v, SUBGRAD_PROBES, seed, SUBGRAD_PROBE_TOL, "subgrad of g")?;
        self.h.certify_subgradient(
            x,
            &w,
            SUBGRAD_PROBES,
            seed ^ 0x9e37_79b9_7f4a_7c15,
            SUBGRAD_PROBE_TOL,
            "subgrad of h",
        )?;
        Ok((v, w))
    }

    /// Raw subgradient selections without probe certification.
    pub fn subgrad_pair_uncertified(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.domain.check_dim(x)?;
        Ok((self.g.subgrad(x), self.h.subgrad(x)))
    }
}

/// Empirical supremum of `||s(x) - s(y)|| / ||x - y||` over sampled pairs in
/// the box, using the oracle's subgradient selection. A value at or below the
/// declared constant supports it (necessary-condition check); piecewise
/// linear oracles blow up across kinks and get flagged by large outputs.
pub fn check_kappa_condition(
    g: &ConvexOracle,
    box_lower: &[f64],
    box_upper: &[f64],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if box_lower.len() != g.dim() || box_upper.len() != g.dim() {
        return Err(Error::DimMismatch {
            expected: g.dim(),
            got: box_lower.len().min(box_upper.len()),
        });
    }
    if box_lower
        .iter()
        .zip(box_upper)
        .any(|(l, u)| !(u - l > 1e-12))
    {
        return Err(Error::InvalidArgument(
            "kappa check needs a nondegenerate box".into(),
        ));
    }
    let mut rng = sampling::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = sampling::uniform_point(&mut rng, box_lower, box_upper);
        let y = sampling::uniform_point(&mut rng, box_lower, box_upper);
        let gap = linalg::dist2(&x, &y);
        if gap <= 1e-12 {
            continue;
        }
        let ratio = linalg::dist2(&g.subgrad(&x), &g.subgrad(&y)) / gap;
        worst = worst.max(ratio);
    }
    Ok(worst)
}
