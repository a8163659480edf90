//! Solvers for constrained difference-of-convex (DC) minimization over the
//! closure of an open convex set.
//!
//! The problem is `min f(x) = g(x) - h(x)` over `cl(C)` with `g`, `h` convex
//! and `C` an open convex set. Two iterations are provided:
//!
//! * an interior subgradient step that linearizes both components and
//!   regularizes with a proximal distance `d(., x^k)` ([`solver::Algo::Alg1`]),
//! * a proximal linearized step that keeps `g` exact and linearizes only `h`
//!   ([`solver::Algo::Alg2`]).
//!
//! Both keep every iterate strictly inside `C` through the barrier behavior of
//! the distance kernel. The [`diagnostics`] module turns the inequalities that
//! drive the convergence theory (per-step descent, nonnegativity of the
//! regularizer inner product, Fejér monotonicity toward a critical point) into
//! runtime certificates evaluated on recorded traces, together with
//! independent oracles (finite differences, grid search) used by the test
//! suite.
//!
//! The crate is `no_std` (alloc only); IO, configuration, and the command-line
//! front end live in the companion `dcprox` crate.

#![no_std]
// NaN-rejecting comparisons (`!(x > 0.0)`) and indexed stencil loops are
// deliberate in the numerical code.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::type_complexity)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dcfun;
pub mod diagnostics;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod proxdist;
pub mod solver;

pub(crate) mod sampling;

pub use error::{Error, Result};
