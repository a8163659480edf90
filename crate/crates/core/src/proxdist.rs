//! Proximal distances `d`, their first-argument gradients, and the induced
//! distances `H` used by the Fejér arguments.
//!
//! A proximal distance relative to an open convex set `C` is a nonnegative
//! bivariate function `d` with `d(., y)` convex, `C^1` on `C`, level bounded,
//! and `d(y, y) = 0`. Its induced distance `H` satisfies `H(x, x) = 0` and the
//! three-point inequality
//!
//! ```text
//! <z - y, grad1_d(y, x)>  <=  H(z, x) - H(z, y)
//! ```
//!
//! which [`ProxDistancePair::h2_residual`] exposes as an executable check
//! (nonnegative residual = inequality holds at that triple).
//!
//! Four kernels ship. Squared Euclidean works on any domain; the entropy-type
//! kernels act as barriers on the positive orthant, which is what keeps the
//! solver iterates strictly interior:
//!
//! | kernel                    | domain            | d(x, y)                                   | H(x, y)                    |
//! |---------------------------|-------------------|-------------------------------------------|----------------------------|
//! | `SquaredEuclidean`        | any               | `1/2 \|x - y\|^2`                         | `= d`                      |
//! | `BoltzmannShannon`        | positive orthant  | `sum x log(x/y) - x + y`                  | `= d`                      |
//! | `Burg`                    | positive orthant  | `sum x/y - log(x/y) - 1`                  | `= d`                      |
//! | `SecondOrderHomogeneous`  | positive orthant  | `sum y^2 phi(x/y)`, `phi` below           | `(1+theta)/2 \|x - y\|^2`  |
//!
//! with `phi(t) = t - log t - 1 + (theta/2)(t-1)^2`. For the homogeneous
//! kernel the quadratic induced distance satisfies the three-point inequality
//! on the closed orthant only for `theta >= 1`; the property tests pin this
//! boundary down empirically.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;

/// Coordinates closer to the boundary than this do not count as interior.
/// Keeps logarithms and divisions finite while interiority stays meaningful
/// at double precision.
pub const INTERIOR_MARGIN: f64 = 1e-12;

/// The open convex set `C` the distance is defined against.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainC {
    AllSpace { dim: usize },
    PositiveOrthant { dim: usize },
    OpenBox { lower: Vec<f64>, upper: Vec<f64> },
}

impl DomainC {
    pub fn all_space(dim: usize) -> Result<Self> {
        Self::check_positive_dim(dim)?;
        Ok(DomainC::AllSpace { dim })
    }

    pub fn positive_orthant(dim: usize) -> Result<Self> {
        Self::check_positive_dim(dim)?;
        Ok(DomainC::PositiveOrthant { dim })
    }

    /// Open box `(lower_i, upper_i)` per coordinate; requires `lower_i < upper_i`.
    pub fn open_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidArgument(format!(
                "box bounds must be nonempty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l < u) {
                return Err(Error::InvalidArgument(format!(
                    "box requires lower < upper in every coordinate; coordinate {i} has [{l}, {u}]"
                )));
            }
        }
        Ok(DomainC::OpenBox { lower, upper })
    }

    fn check_positive_dim(dim: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "domain dimension must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainC::AllSpace { dim } | DomainC::PositiveOrthant { dim } => *dim,
            DomainC::OpenBox { lower, .. } => lower.len(),
        }
    }

    /// Strict interiority: every coordinate farther than [`INTERIOR_MARGIN`]
    /// from the boundary (and finite).
    pub fn is_strictly_inside(&self, x: &[f64]) -> bool {
        self.interior_violation(x).is_none()
    }

    fn interior_violation(&self, x: &[f64]) -> Option<usize> {
        match self {
            DomainC::AllSpace { .. } => x.iter().position(|v| !v.is_finite()),
            DomainC::PositiveOrthant { .. } => {
                x.iter().position(|v| !v.is_finite() || *v <= INTERIOR_MARGIN)
            }
            DomainC::OpenBox { lower, upper } => x.iter().enumerate().position(|(i, v)| {
                !v.is_finite() || v - lower[i] <= INTERIOR_MARGIN || upper[i] - v <= INTERIOR_MARGIN
            }),
        }
    }

    /// Membership in the closure of `C` (boundary allowed, exact comparison).
    pub fn is_in_closure(&self, x: &[f64]) -> bool {
        self.closure_violation(x).is_none()
    }

    fn closure_violation(&self, x: &[f64]) -> Option<usize> {
        match self {
            DomainC::AllSpace { .. } => x.iter().position(|v| !v.is_finite()),
            DomainC::PositiveOrthant { .. } => x.iter().position(|v| !v.is_finite() || *v < 0.0),
            DomainC::OpenBox { lower, upper } => x
                .iter()
                .enumerate()
                .position(|(i, v)| !v.is_finite() || *v < lower[i] || *v > upper[i]),
        }
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn check_interior(&self, x: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        match self.interior_violation(x) {
            None => Ok(()),
            Some(i) => Err(Error::NotInterior {
                index: i,
                value: x[i],
            }),
        }
    }

    pub fn check_closure(&self, x: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        match self.closure_violation(x) {
            None => Ok(()),
            Some(i) => Err(Error::OutsideClosure {
                index: i,
                value: x[i],
            }),
        }
    }

    /// Nearest point of the closure (coordinate-wise clamp).
    pub fn project_to_closure(&self, x: &[f64]) -> Vec<f64> {
        match self {
            DomainC::AllSpace { .. } => x.to_vec(),
            DomainC::PositiveOrthant { .. } => x.iter().map(|v| v.max(0.0)).collect(),
            DomainC::OpenBox { lower, upper } => x
                .iter()
                .enumerate()
                .map(|(i, v)| v.max(lower[i]).min(upper[i]))
                .collect(),
        }
    }
}

/// Distance kernel; see the module docs for the formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    SquaredEuclidean,
    BoltzmannShannon,
    Burg,
    SecondOrderHomogeneous { theta: f64 },
}

impl Kernel {
    pub fn name(&self) -> &'static str {
        match self {
            Kernel::SquaredEuclidean => "sq_euclidean",
            Kernel::BoltzmannShannon => "boltzmann_shannon",
            Kernel::Burg => "burg",
            Kernel::SecondOrderHomogeneous { .. } => "second_order_homogeneous",
        }
    }
}

/// A proximal distance together with its induced distance, tagged with the
/// domain it regularizes. Immutable once built; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxDistancePair {
    kernel: Kernel,
    domain: DomainC,
    phi_closure: bool,
}

impl ProxDistancePair {
    /// Pairs a kernel with a domain. The entropy-type kernels require the
    /// positive orthant; squared Euclidean accepts any domain (on a bounded
    /// box its step may leave the box, which the solver reports as an
    /// infeasible step).
    pub fn new(kernel: Kernel, domain: DomainC) -> Result<Self> {
        match kernel {
            Kernel::SquaredEuclidean => {}
            Kernel::BoltzmannShannon | Kernel::Burg => {
                if !matches!(domain, DomainC::PositiveOrthant { .. }) {
                    return Err(Error::Unsupported(format!(
                        "kernel {} is defined on the positive orthant",
                        kernel.name()
                    )));
                }
            }
            Kernel::SecondOrderHomogeneous { theta } => {
                if !(theta > 0.0) {
                    return Err(Error::InvalidArgument(
                        "second-order homogeneous kernel needs theta > 0".into(),
                    ));
                }
                if !matches!(domain, DomainC::PositiveOrthant { .. }) {
                    return Err(Error::Unsupported(format!(
                        "kernel {} is defined on the positive orthant",
                        kernel.name()
                    )));
                }
            }
        }
        // H finite on closure x interior ("Phi of the closed set" registration):
        // true for all kernels except Burg, whose H = d blows up on the boundary.
        let phi_closure = !matches!(kernel, Kernel::Burg);
        Ok(Self {
            kernel,
            domain,
            phi_closure,
        })
    }

    pub fn squared_euclidean(dim: usize) -> Result<Self> {
        Self::new(Kernel::SquaredEuclidean, DomainC::all_space(dim)?)
    }

    pub fn boltzmann_shannon(dim: usize) -> Result<Self> {
        Self::new(Kernel::BoltzmannShannon, DomainC::positive_orthant(dim)?)
    }

    pub fn burg(dim: usize) -> Result<Self> {
        Self::new(Kernel::Burg, DomainC::positive_orthant(dim)?)
    }

    pub fn second_order_homogeneous(dim: usize, theta: f64) -> Result<Self> {
        Self::new(
            Kernel::SecondOrderHomogeneous { theta },
            DomainC::positive_orthant(dim)?,
        )
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn domain(&self) -> &DomainC {
        &self.domain
    }

    /// Whether `H(z, .)` stays finite for `z` on the boundary, so the pair's
    /// three-point inequality extends to the closure.
    pub fn in_phi_closure(&self) -> bool {
        self.phi_closure
    }

    /// `d(x, y)` for `y` strictly inside and `x` in the closure of the domain.
    /// Returns `f64::INFINITY` when `x` is outside `dom d(., y)` (for example
    /// a zero coordinate under the Burg kernel).
    pub fn eval_d(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.domain.check_interior(y)?;
        self.domain.check_closure(x)?;
        let v = match self.kernel {
            Kernel::SquaredEuclidean => {
                0.5 * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            }
            Kernel::BoltzmannShannon => {
                let mut s = 0.0;
                for (a, b) in x.iter().zip(y) {
                    if *a < 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    // convention 0 log 0 = 0
                    s += if *a == 0.0 {
                        *b
                    } else {
                        a * libm::log(a / b) - a + b
                    };
                }
                s
            }
            Kernel::Burg => {
                let mut s = 0.0;
                for (a, b) in x.iter().zip(y) {
                    if *a <= 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    let t = a / b;
                    s += t - libm::log(t) - 1.0;
                }
                s
            }
            Kernel::SecondOrderHomogeneous { theta } => {
                let mut s = 0.0;
                for (a, b) in x.iter().zip(y) {
                    if *a <= 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    let t = a / b;
                    s += b * b * (t - libm::log(t) - 1.0 + 0.5 * theta * (t - 1.0) * (t - 1.0));
                }
                s
            }
        };
        // guard against tiny negative rounding near x == y
        Ok(v.max(0.0))
    }

    /// Gradient of `d(., y)` at `x`; both points strictly inside the domain.
    pub fn grad1_d(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.domain.check_interior(y)?;
        self.domain.check_interior(x)?;
        Ok(self.grad1_d_unchecked(x, y))
    }

    fn grad1_d_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        match self.kernel {
            Kernel::SquaredEuclidean => linalg::sub(x, y),
            Kernel::BoltzmannShannon => x.iter().zip(y).map(|(a, b)| libm::log(a / b)).collect(),
            Kernel::Burg => x.iter().zip(y).map(|(a, b)| 1.0 / b - 1.0 / a).collect(),
            Kernel::SecondOrderHomogeneous { theta } => x
                .iter()
                .zip(y)
                .map(|(a, b)| {
                    let t = a / b;
                    b * (1.0 - 1.0 / t + theta * (t - 1.0))
                })
                .collect(),
        }
    }

    /// Coordinate-wise second derivative of `d(., y)` at `x`; used by the
    /// Newton inner solver. All shipped kernels are separable.
    pub(crate) fn diag_hess1_d(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        match self.kernel {
            Kernel::SquaredEuclidean => x.iter().map(|_| 1.0).collect(),
            Kernel::BoltzmannShannon => x.iter().map(|a| 1.0 / a).collect(),
            Kernel::Burg => x.iter().map(|a| 1.0 / (a * a)).collect(),
            Kernel::SecondOrderHomogeneous { theta } => x
                .iter()
                .zip(y)
                .map(|(a, b)| (b * b) / (a * a) + theta)
                .collect(),
        }
    }

    /// Induced distance `H(x, y)`; `x` in the closure, `y` strictly inside.
    pub fn eval_h(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self.kernel {
            Kernel::SecondOrderHomogeneous { theta } => {
                self.domain.check_interior(y)?;
                self.domain.check_closure(x)?;
                Ok(0.5 * (1.0 + theta) * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            }
            // the other three are self-induced
            _ => self.eval_d(x, y),
        }
    }

    /// Slack of the three-point inequality at `(z, x, y)`:
    ///
    /// ```text
    /// H(z, x) - H(z, y) - <z - y, grad1_d(y, x)>
    /// ```
    ///
    /// Nonnegative output certifies the inequality at this triple. `x` and `y`
    /// must be strictly inside; `z` may touch the boundary only for pairs
    /// whose `H` is finite there (see [`Self::in_phi_closure`]).
    pub fn h2_residual(&self, z: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
        self.domain.check_interior(x)?;
        self.domain.check_interior(y)?;
        if self.phi_closure {
            self.domain.check_closure(z)?;
        } else {
            self.domain.check_interior(z)?;
        }
        let hzx = self.eval_h(z, x)?;
        let hzy = self.eval_h(z, y)?;
        let grad = self.grad1_d_unchecked(y, x);
        let inner = linalg::dot(&linalg::sub(z, y), &grad);
        Ok(hzx - hzy - inner)
    }

    /// Solves the stationarity condition `lambda * c + grad1_d(z, y) = 0` for
    /// the unique `z` strictly inside `C`, the update behind the interior
    /// subgradient step. Closed forms per kernel:
    ///
    /// * squared Euclidean: `z = y - lambda c` (may leave a box domain);
    /// * Boltzmann-Shannon: `z_i = y_i exp(-lambda c_i)`;
    /// * Burg: `z_i = y_i / (1 + lambda c_i y_i)`, solvable only when the
    ///   denominator is positive;
    /// * second-order homogeneous: positive root of a coordinate quadratic.
    ///
    /// Returns an infeasible-step error when no interior solution exists, in
    /// which case the caller is expected to shrink `lambda`.
    pub fn kernel_map_inverse(&self, y: &[f64], c: &[f64], lambda: f64) -> Result<Vec<f64>> {
        self.domain.check_interior(y)?;
        self.domain.check_dim(c)?;
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step size must be positive, got {lambda}"
            )));
        }
        let z: Vec<f64> = match self.kernel {
            Kernel::SquaredEuclidean => linalg::axpy(y, -lambda, c),
            Kernel::BoltzmannShannon => y
                .iter()
                .zip(c)
                .map(|(b, ci)| b * libm::exp(-lambda * ci))
                .collect(),
            Kernel::Burg => {
                let mut z = Vec::with_capacity(y.len());
                for (i, (b, ci)) in y.iter().zip(c).enumerate() {
                    let denom = 1.0 + lambda * ci * b;
                    if denom <= 0.0 {
                        return Err(Error::InfeasibleStep {
                            reason: format!(
                                "burg stationarity has no interior root in coordinate {i} \
                                 (1 + lambda*c*y = {denom:e})"
                            ),
                        });
                    }
                    z.push(b / denom);
                }
                z
            }
            Kernel::SecondOrderHomogeneous { theta } => y
                .iter()
                .zip(c)
                .map(|(b, ci)| {
                    // theta*y t^2 + (lambda c + y(1-theta)) t - y = 0, unique t > 0
                    let qb = lambda * ci + b * (1.0 - theta);
                    let disc = libm::sqrt(qb * qb + 4.0 * theta * b * b);
                    let t = if qb > 0.0 {
                        2.0 * b / (qb + disc)
                    } else {
                        (disc - qb) / (2.0 * theta * b)
                    };
                    b * t
                })
                .collect(),
        };
        if let Some(i) = self.domain.interior_violation(&z) {
            return Err(Error::InfeasibleStep {
                reason: format!(
                    "step leaves the interior of the domain in coordinate {i} (value {:e})",
                    z[i]
                ),
            });
        }
        Ok(z)
    }
}
