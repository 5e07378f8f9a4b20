use std::path::PathBuf;

/// Errors raised by filtering and metric computation.
#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    /// Invalid band, Nyquist violation, mismatched lengths, too-short input.
    #[error("configuration error: {0}")]
    Config(String),
    /// Writing an artifact failed.
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
