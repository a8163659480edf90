//! Shipped DC test instances with the regularity constants the certificates
//! need, each bounded below on its admissible domains by construction.
//!
//! | name               | f(x)                               | highlights                                     |
//! |--------------------|------------------------------------|------------------------------------------------|
//! | `abs_quadratic_dc` | `\|x\| + x^2/2`                    | nonsmooth g: subgradient steps only             |
//! | `absdiff_dc`       | `x^2/2 - \|x\|`                    | nonsmooth h; non-monotone under large steps     |
//! | `concave_box_dc`   | `2x - 1.25x^2` on `(0,4)`          | affine g (kappa = 0), so rho > kappa holds      |
//! | `halfsq_dc`        | `x^2/2`                            | boundary critical point at the origin           |
//! | `maxsum2d_dc`      | `\|\|x\|\|^2/2 - max(x1+x2, 0)`    | 2-D with nonsmooth h                            |
//! | `quadratic2d_dc`   | `x1^2/2 + x2^2 - x1 - 2x2`         | 2-D, gamma = 2 > L + 1/2                        |
//! | `quadratic_dc`     | `(x-2)^2/2`                        | 1-D workhorse, gamma = 2 > L + 1/2              |
//! | `zero_dc`          | `0` (g = h)                        | every point critical; fixed-point traces        |
//!
//! `concave_box_dc` is the adversarial regime for the interior subgradient
//! iteration: its objective is strictly concave, so descent drives iterates
//! into the boundary of the box where the Euclidean step eventually leaves
//! the interior and the run ends with an infeasible-step termination. The
//! recorded prefix is valid trace data with `rho > kappa`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dcfun::{ConvexOracle, DCProblem};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::proxdist::{DomainC, Kernel};

/// Registry metadata for one shipped instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub dim: usize,
    /// Strong convexity modulus of `h`.
    pub rho: f64,
    /// Strong convexity modulus of `g`.
    pub gamma: f64,
    /// Lipschitz constant of `grad h`, when `h` is smooth.
    pub smooth_l: Option<f64>,
    /// Subdifferential Lipschitz constant of `g`, when bounded.
    pub kappa: Option<f64>,
}

/// Sorted names of every shipped instance.
pub const NAMES: [&str; 8] = [
    "abs_quadratic_dc",
    "absdiff_dc",
    "concave_box_dc",
    "halfsq_dc",
    "maxsum2d_dc",
    "quadratic2d_dc",
    "quadratic_dc",
    "zero_dc",
];

fn description(name: &str) -> &'static str {
    match name {
        "abs_quadratic_dc" => "|x| + x^2/2 via g = |x| + x^2, h = x^2/2; nonsmooth g",
        "absdiff_dc" => "x^2/2 - |x|; nonsmooth h with critical points at +-1",
        "concave_box_dc" => "2x - 1.25x^2 on the box (0,4); affine g gives kappa = 0 < rho",
        "halfsq_dc" => "x^2/2 via g = x^2, h = x^2/2; critical point on the orthant boundary",
        "maxsum2d_dc" => "||x||^2/2 - max(x1+x2, 0); 2-D nonsmooth h, minimum at (1,1)",
        "quadratic2d_dc" => "x1^2/2 + x2^2 - x1 - 2x2; 2-D quadratic, minimum at (1,1)",
        "quadratic_dc" => "(x-2)^2/2 via g = x^2, h = x^2/2 + 2x - 2; minimum at 2",
        "zero_dc" => "g = h = x^2/2, so f = 0 and every point is critical",
        _ => "",
    }
}

fn dim_of(name: &str) -> Option<usize> {
    match name {
        "abs_quadratic_dc" | "absdiff_dc" | "concave_box_dc" | "halfsq_dc" | "quadratic_dc"
        | "zero_dc" => Some(1),
        "maxsum2d_dc" | "quadratic2d_dc" => Some(2),
        _ => None,
    }
}

/// The natural domain for an instance under the given kernel: the box the
/// instance was designed for, otherwise all of space for the Euclidean kernel
/// and the positive orthant for the barrier kernels.
pub fn default_domain(name: &str, kernel: Kernel) -> Result<DomainC> {
    let dim = dim_of(name).ok_or_else(|| unknown_instance(name))?;
    if name == "concave_box_dc" {
        return DomainC::open_box(vec![0.0], vec![4.0]);
    }
    match kernel {
        Kernel::SquaredEuclidean => DomainC::all_space(dim),
        _ => DomainC::positive_orthant(dim),
    }
}

fn unknown_instance(name: &str) -> Error {
    Error::InvalidArgument(format!(
        "unknown instance '{name}'; shipped instances: {}",
        NAMES.join(", ")
    ))
}

/// Builds a shipped instance on the requested domain, filtering the declared
/// ground-truth points down to the domain closure.
pub fn build(name: &str, domain: DomainC) -> Result<DCProblem> {
    let dim = dim_of(name).ok_or_else(|| unknown_instance(name))?;
    if domain.dim() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: domain.dim(),
        });
    }

    let (g, h, minimizer, critical): (ConvexOracle, ConvexOracle, Option<Vec<f64>>, Vec<Vec<f64>>) =
        match name {
            "zero_dc" => (
                ConvexOracle::scaled_norm_sq(1, 1.0)?,
                ConvexOracle::scaled_norm_sq(1, 1.0)?,
                None,
                vec![vec![1.0]],
            ),
            "quadratic_dc" => (
                ConvexOracle::scaled_norm_sq(1, 2.0)?,
                ConvexOracle::quadratic(SymMatrix::diag(&[1.0]), vec![2.0], -2.0)?,
                Some(vec![2.0]),
                vec![vec![2.0]],
            ),
            "quadratic2d_dc" => (
                ConvexOracle::quadratic(SymMatrix::diag(&[2.0, 3.0]), vec![0.0, 0.0], 0.0)?,
                ConvexOracle::quadratic(SymMatrix::diag(&[1.0, 1.0]), vec![1.0, 2.0], 0.0)?,
                Some(vec![1.0, 1.0]),
                vec![vec![1.0, 1.0]],
            ),
            "halfsq_dc" => (
                ConvexOracle::scaled_norm_sq(1, 2.0)?,
                ConvexOracle::scaled_norm_sq(1, 1.0)?,
                Some(vec![0.0]),
                vec![vec![0.0]],
            ),
            "absdiff_dc" => (
                ConvexOracle::scaled_norm_sq(1, 1.0)?,
                ConvexOracle::affine_max(vec![vec![1.0], vec![-1.0]], vec![0.0, 0.0])?,
                None,
                vec![vec![1.0], vec![-1.0]],
            ),
            "abs_quadratic_dc" => (
                ConvexOracle::sum(
                    ConvexOracle::affine_max(vec![vec![1.0], vec![-1.0]], vec![0.0, 0.0])?,
                    ConvexOracle::scaled_norm_sq(1, 2.0)?,
                )?,
                ConvexOracle::scaled_norm_sq(1, 1.0)?,
                Some(vec![0.0]),
                Vec::new(),
            ),
            "concave_box_dc" => {
                if !matches!(domain, DomainC::OpenBox { .. }) {
                    return Err(Error::Unsupported(
                        "concave_box_dc is bounded below only on a box domain".into(),
                    ));
                }
                // h = 1.25 x^2 with its modulus declared conservatively at 1
                // (true bound: the curvature is 2.5). The per-step descent
                // inequality is tight at half the curvature, so the spare
                // margin keeps the certificate robustly inside tolerance.
                let h = ConvexOracle::from_parts(
                    1,
                    alloc::boxed::Box::new(|x: &[f64]| 1.25 * x[0] * x[0]),
                    alloc::boxed::Box::new(|x: &[f64]| vec![2.5 * x[0]]),
                    1.0,
                    Some(2.5),
                    true,
                    Some(2.5),
                );
                (
                    ConvexOracle::quadratic(SymMatrix::diag(&[0.0]), vec![2.0], 0.0)?,
                    h,
                    Some(vec![4.0]),
                    vec![vec![0.0], vec![0.8], vec![4.0]],
                )
            }
            "maxsum2d_dc" => (
                ConvexOracle::scaled_norm_sq(2, 1.0)?,
                ConvexOracle::affine_max(
                    vec![vec![1.0, 1.0], vec![0.0, 0.0]],
                    vec![0.0, 0.0],
                )?,
                Some(vec![1.0, 1.0]),
                vec![vec![1.0, 1.0]],
            ),
            _ => return Err(unknown_instance(name)),
        };

    let mut p = DCProblem::new(g, h, domain)?;
    if let Some(m) = minimizer {
        if p.domain.is_in_closure(&m) {
            p = p.with_known_minimizer(m);
        }
    }
    let kept: Vec<Vec<f64>> = critical
        .into_iter()
        .filter(|c| p.domain.is_in_closure(c))
        .collect();
    Ok(p.with_known_critical_points(kept))
}

/// Metadata for the listing; constants read off the constructed oracles.
pub fn info(name: &str) -> Result<InstanceInfo> {
    let dim = dim_of(name).ok_or_else(|| unknown_instance(name))?;
    let domain = if name == "concave_box_dc" {
        DomainC::open_box(vec![0.0], vec![4.0])?
    } else {
        DomainC::all_space(dim)?
    };
    let p = build(name, domain)?;
    Ok(InstanceInfo {
        name: NAMES
            .iter()
            .find(|n| **n == name)
            .copied()
            .ok_or_else(|| unknown_instance(name))?,
        description: description(name),
        dim,
        rho: p.h.strong_convexity_modulus(),
        gamma: p.g.strong_convexity_modulus(),
        smooth_l: if p.h.is_smooth() {
            p.h.grad_lipschitz()
        } else {
            None
        },
        kappa: p.g.subdiff_lipschitz(),
    })
}

/// Metadata for every shipped instance, sorted by name.
pub fn all() -> Vec<InstanceInfo> {
    NAMES.iter().map(|n| info(n).expect("shipped instance")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics;

    #[test]
    fn registry_is_sorted_and_buildable() {
        let mut sorted = NAMES.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, NAMES.to_vec());
        for inst in all() {
            assert!(!inst.description.is_empty());
            let domain = default_domain(inst.name, Kernel::SquaredEuclidean).unwrap();
            build(inst.name, domain).unwrap();
        }
    }

    #[test]
    fn quadratic_dc_constants() {
        let i = info("quadratic_dc").unwrap();
        assert_eq!(i.rho, 1.0);
        assert_eq!(i.gamma, 2.0);
        assert_eq!(i.smooth_l, Some(1.0));
        assert_eq!(i.kappa, Some(2.0));
    }

    #[test]
    fn concave_box_has_rho_above_kappa() {
        let i = info("concave_box_dc").unwrap();
        assert_eq!(i.kappa, Some(0.0));
        assert!(i.rho > i.kappa.unwrap());
    }

    #[test]
    fn abs_quadratic_has_unbounded_kappa() {
        let i = info("abs_quadratic_dc").unwrap();
        assert_eq!(i.kappa, None);
        assert_eq!(i.rho, 1.0);
    }

    #[test]
    fn concave_box_rejects_unbounded_domains() {
        assert!(build("concave_box_dc", DomainC::all_space(1).unwrap()).is_err());
        assert!(build("concave_box_dc", DomainC::positive_orthant(1).unwrap()).is_err());
    }

    #[test]
    fn known_points_are_filtered_to_the_domain() {
        // on the orthant only the +1 critical point of absdiff_dc survives
        let p = build("absdiff_dc", DomainC::positive_orthant(1).unwrap()).unwrap();
        assert_eq!(p.known_critical_points, alloc::vec![alloc::vec![1.0]]);
        let p = build("absdiff_dc", DomainC::all_space(1).unwrap()).unwrap();
        assert_eq!(p.known_critical_points.len(), 2);
    }

    #[test]
    fn known_critical_points_have_zero_residual() {
        for name in NAMES {
            let domain = default_domain(name, Kernel::SquaredEuclidean).unwrap();
            let p = build(name, domain).unwrap();
            for c in &p.known_critical_points {
                let r = diagnostics::criticality_residual(&p, c, 200, 1.0, 0).unwrap();
                assert!(r <= 1e-7, "{name} at {c:?}: residual {r:e}");
            }
        }
    }

    #[test]
    fn known_minimizers_match_brute_force() {
        // one grid cell of agreement on a box around the declared minimizer
        for (name, lo, hi) in [
            ("quadratic_dc", vec![0.0], vec![5.0]),
            ("halfsq_dc", vec![0.0], vec![3.0]),
            ("abs_quadratic_dc", vec![-2.0], vec![2.0]),
        ] {
            let p = build(name, DomainC::all_space(1).unwrap()).unwrap();
            let m = p.known_minimizer.clone().unwrap();
            let res = 401;
            let (x, _) = diagnostics::brute_force_min(&p, &lo, &hi, res).unwrap();
            let cell = (hi[0] - lo[0]) / ((res - 1) as f64);
            assert!(
                (x[0] - m[0]).abs() <= cell + 1e-12,
                "{name}: grid {x:?} vs known {m:?}"
            );
        }
    }
}
