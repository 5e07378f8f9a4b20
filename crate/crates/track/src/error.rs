use std::path::PathBuf;

/// Errors raised by track construction, synthesis and I/O.
#[derive(Debug, thiserror::Error)]
pub enum TrackError {
    /// Arrays that must share a grid have different lengths, or a grid is
    /// not uniform.
    #[error("structural input error: {0}")]
    Structural(String),
    /// A parameter violates its documented range (e.g. Nyquist).
    #[error("configuration error: {0}")]
    Config(String),
    /// Reading or writing a profile file failed.
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, TrackError>;
