use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weight {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("unsupported set variant: {0}")]
    UnsupportedVariant(String),

    #[error("infeasible point: distance {distance:e} exceeds tolerance {tolerance:e}")]
    Infeasible { distance: f64, tolerance: f64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("derivative check failed: worst relative error {0:e}")]
    DerivativeCheck(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
