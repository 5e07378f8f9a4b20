use std::path::PathBuf;

/// Errors raised by identification.
#[derive(Debug, thiserror::Error)]
pub enum IdentError {
    /// Invalid problem definition.
    #[error("configuration error: {0}")]
    Config(String),
    /// Writing the result failed.
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl From<alignest_dynamics::DynamicsError> for IdentError {
    fn from(e: alignest_dynamics::DynamicsError) -> Self {
        Self::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, IdentError>;
