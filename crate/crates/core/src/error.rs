use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller supplied an out-of-range or inconsistent parameter.
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: String, reason: String },

    /// Eigendecomposition or special-function evaluation failed.
    #[error("numerical failure in {context}: {reason}")]
    Numerical { context: String, reason: String },

    /// A truncated distribution could not reach the requested tail tolerance.
    #[error("truncation failed: achieved tail mass {achieved:e} > tolerance {tolerance:e} (n_max = {n_max})")]
    Truncation {
        achieved: f64,
        tolerance: f64,
        n_max: usize,
    },

    /// A physical invariant was violated beyond tolerance.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn numerical(context: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Numerical {
            context: context.into(),
            reason: reason.into(),
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter { .. } => 2,
            Error::Numerical { .. } | Error::Truncation { .. } | Error::Invariant(_) => 3,
            Error::Io(_) | Error::Json(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
