//! Error type shared by all solver and diagnostic operations.

use alloc::string::String;

/// Errors raised by domain checks, oracle contracts, and subproblem solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// A point required to be strictly inside the open set `C` touches or
    /// crosses the boundary.
    #[error("point not strictly inside the domain: coordinate {index} = {value:e}")]
    NotInterior { index: usize, value: f64 },

    /// A point required to lie in the closure of the domain is outside it.
    #[error("point outside the domain closure: coordinate {index} = {value:e}")]
    OutsideClosure { index: usize, value: f64 },

    /// The regularized subproblem has no solution strictly inside `C` for the
    /// given step size; the caller may retry with a smaller one.
    #[error("infeasible step: {reason}")]
    InfeasibleStep { reason: String },

    /// A user-supplied oracle returned a vector that fails the subgradient
    /// inequality on a probe point.
    #[error("oracle contract violated in {check}: slack {slack:e} at probe {probe}")]
    OracleContract {
        check: &'static str,
        slack: f64,
        probe: usize,
    },

    /// The inner solver for the proximal subproblem did not reach the
    /// requested stationarity tolerance.
    #[error("inner solve stalled: residual {residual:e} after {iters} iterations (tol {tol:e})")]
    InnerSolve {
        residual: f64,
        iters: usize,
        tol: f64,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
