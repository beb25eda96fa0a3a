use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (bad order, bad index, point outside S^n).
    #[error("domain error: {0}")]
    Domain(String),
    /// Operand shapes are incompatible.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A combinatorial size guard tripped.
    #[error("capacity exceeded: {what} requires {required}, limit is {limit}")]
    Capacity {
        what: String,
        required: u128,
        limit: u128,
    },
    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Iteration failure, numerical singularity, or a failed internal self-check.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
