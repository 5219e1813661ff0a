use thiserror::Error;

/// Errors raised by the algebraic and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("multi-index must be non-empty")]
    EmptyMultiIndex,

    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),

    #[error("Jacobi identity fails at triple ({}, {}, {})", .0[0] + 1, .0[1] + 1, .0[2] + 1)]
    JacobiViolation([usize; 3]),

    #[error("invalid weighted basis: {0}")]
    InvalidBasis(String),

    #[error("basis elements and their multi-commutators do not span the algebra")]
    NotAlgebraicBasis,

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
