use std::path::PathBuf;

/// Errors raised by filter construction and execution.
#[derive(Debug, thiserror::Error)]
pub enum EstimatorError {
    /// Inconsistent dimensions, unknown strategy names, bad parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// Singular or non-finite quantities; `step` is the filter step index
    /// when the failure happened inside the recursion.
    #[error("numeric error{}: {message}", step.map(|k| format!(" at step {k}")).unwrap_or_default())]
    Numeric { step: Option<usize>, message: String },
    /// Reading or writing an artifact failed.
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl EstimatorError {
    pub(crate) fn numeric(message: impl Into<String>) -> Self {
        Self::Numeric {
            step: None,
            message: message.into(),
        }
    }

    pub(crate) fn at_step(step: usize, message: impl Into<String>) -> Self {
        Self::Numeric {
            step: Some(step),
            message: message.into(),
        }
    }
}

impl From<alignest_dynamics::DynamicsError> for EstimatorError {
    fn from(e: alignest_dynamics::DynamicsError) -> Self {
        match e {
            alignest_dynamics::DynamicsError::Config(m) => Self::Config(m),
            alignest_dynamics::DynamicsError::Numeric(m) => Self::numeric(m),
        }
    }
}

pub type Result<T> = std::result::Result<T, EstimatorError>;
