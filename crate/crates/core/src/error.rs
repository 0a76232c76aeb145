use thiserror::Error;

use crate::norm::NormClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("zero vector is not allowed here")]
    ZeroVector,

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a {expected:?} norm, got {found:?}")]
    WrongNormClass { expected: NormClass, found: NormClass },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("{0}")]
    Domain(String),
}
