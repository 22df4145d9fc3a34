use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Cholesky pivot fell below `n·ε·max_diag`.
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("symmetric eigenvalue iteration did not converge for a {n}x{n} matrix")]
    ConvergenceFailure { n: usize },

    #[error("{0}")]
    DomainError(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("insufficient data: need at least {needed} points, got {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// Stable identifier used in structured error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::DomainError(_) => "DomainError",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::InvalidGrid(_) => "InvalidGrid",
        }
    }

    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DomainError(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidPartition(_)
                | Error::InsufficientData { .. }
                | Error::InvalidGrid(_)
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::DomainError(msg.into())
    }
}
