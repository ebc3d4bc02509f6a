use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix argument has the wrong length.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The operation requires a shape the problem does not have
    /// (e.g. a diagonal preconditioner for a rectangular Jacobian).
    #[error("unsupported shape: {0}")]
    Shape(String),

    /// A triangular or banded system is numerically singular.
    #[error("singular system: {0}")]
    Singular(String),

    /// A new column is numerically dependent on the orthonormal basis.
    #[error("basis breakdown at column {col}: residual norm {residual:.3e}")]
    Breakdown { col: usize, residual: f64 },

    /// The extrapolation coefficients are not defined for this window.
    #[error("degenerate extrapolation: {0}")]
    Degenerate(String),

    /// The requested diagnostic does not exist for this method.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Backtracking exhausted its budget without sufficient decrease.
    #[error("line search failed: {0}")]
    LineSearch(String),

    /// Invalid solver or problem configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
