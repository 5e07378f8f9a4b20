/// Errors raised by model assembly and analysis.
#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    /// Invalid parameter values.
    #[error("configuration error: {0}")]
    Config(String),
    /// Singular matrices, failed eigen-decomposition or divergence.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, DynamicsError>;
