//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {asym:e} exceeds {tol:e}")]
    NotSymmetric { i: usize, j: usize, asym: f64, tol: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("eigensolver did not converge: dim {dim}, frobenius norm {norm:e}, max |entry| {max_entry:e}")]
    EigenFailure { dim: usize, norm: f64, max_entry: f64 },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("pair is not strictly ordered: min eigenvalue of the difference is {witness_min_eig}")]
    NotStrictlyOrdered { witness_min_eig: f64 },

    #[error("matrix is not strictly positive definite: min eigenvalue {min_eig}")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("exponent domain violation: {0}")]
    ExponentDomainViolation(String),

    #[error("function is constant; this bound requires a nonconstant function")]
    ConstantFunction,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("infeasible pair spec: {0}")]
    InfeasibleSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
