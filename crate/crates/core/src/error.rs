use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid mesh request: {0}")]
    InvalidMesh(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("LDLᵀ breakdown at pivot {index} (|d| = {pivot:e})")]
    Breakdown { index: usize, pivot: f64 },

    #[error("singular or near-singular system (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error(
        "eigensolver did not converge after {iterations} iterations (worst residual {worst:e})"
    )]
    NoConvergence {
        iterations: usize,
        worst: f64,
        residuals: Vec<f64>,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures raised by the linear or eigen solvers.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Breakdown { .. } | Error::Singular { .. } | Error::NoConvergence { .. }
        )
    }
}
