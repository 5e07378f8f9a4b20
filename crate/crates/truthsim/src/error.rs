use std::path::PathBuf;

/// Errors raised by the truth simulator.
#[derive(Debug, thiserror::Error)]
pub enum TruthError {
    /// Invalid parameters, profile too short, bad time step.
    #[error("configuration error: {0}")]
    Config(String),
    /// The integration blew up or produced non-finite values.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Writing an export file failed.
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl From<alignest_dynamics::DynamicsError> for TruthError {
    fn from(e: alignest_dynamics::DynamicsError) -> Self {
        match e {
            alignest_dynamics::DynamicsError::Config(m) => TruthError::Config(m),
            alignest_dynamics::DynamicsError::Numeric(m) => TruthError::Numeric(m),
        }
    }
}

impl From<alignest_track::TrackError> for TruthError {
    fn from(e: alignest_track::TrackError) -> Self {
        TruthError::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TruthError>;
