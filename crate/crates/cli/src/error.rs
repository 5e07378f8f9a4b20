use std::path::PathBuf;

/// Process exit status for success.
pub const EXIT_OK: i32 = 0;
/// Invalid configuration (including unobservable set-ups).
pub const EXIT_CONFIG: i32 = 2;
/// Numerical failure (instability, singular matrices).
pub const EXIT_NUMERIC: i32 = 3;
/// File-system failure.
pub const EXIT_IO: i32 = 4;
/// Identification finished without converging.
pub const EXIT_NOT_CONVERGED: i32 = 5;

/// Errors surfaced by the front end, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("identification did not converge (result written to {0})")]
    NotConverged(PathBuf),
}

impl CliError {
    /// Exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io { .. } => EXIT_IO,
            CliError::NotConverged(_) => EXIT_NOT_CONVERGED,
        }
    }

    /// Prefixes the message with a run identifier.
    pub fn in_run(self, run_id: &str) -> Self {
        match self {
            CliError::Config(m) => CliError::Config(format!("[{run_id}] {m}")),
            CliError::Numeric(m) => CliError::Numeric(format!("[{run_id}] {m}")),
            other => other,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.into(),
            message: e.to_string(),
        }
    }
}

impl From<alignest_track::TrackError> for CliError {
    fn from(e: alignest_track::TrackError) -> Self {
        use alignest_track::TrackError as E;
        match e {
            E::Config(m) | E::Structural(m) => CliError::Config(m),
            E::Io { path, message } => CliError::Io { path, message },
        }
    }
}

impl From<alignest_dynamics::DynamicsError> for CliError {
    fn from(e: alignest_dynamics::DynamicsError) -> Self {
        use alignest_dynamics::DynamicsError as E;
        match e {
            E::Config(m) => CliError::Config(m),
            E::Numeric(m) => CliError::Numeric(m),
        }
    }
}

impl From<alignest_truthsim::TruthError> for CliError {
    fn from(e: alignest_truthsim::TruthError) -> Self {
        use alignest_truthsim::TruthError as E;
        match e {
            E::Config(m) => CliError::Config(m),
            E::Numeric(m) => CliError::Numeric(m),
            E::Io { path, message } => CliError::Io { path, message },
        }
    }
}

impl From<alignest_estimator::EstimatorError> for CliError {
    fn from(e: alignest_estimator::EstimatorError) -> Self {
        use alignest_estimator::EstimatorError as E;
        match e {
            E::Config(m) => CliError::Config(m),
            e @ E::Numeric { .. } => CliError::Numeric(e.to_string()),
            E::Io { path, message } => CliError::Io { path, message },
        }
    }
}

impl From<alignest_analysis::AnalysisError> for CliError {
    fn from(e: alignest_analysis::AnalysisError) -> Self {
        use alignest_analysis::AnalysisError as E;
        match e {
            E::Config(m) => CliError::Config(m),
            E::Io { path, message } => CliError::Io { path, message },
        }
    }
}

impl From<alignest_ident::IdentError> for CliError {
    fn from(e: alignest_ident::IdentError) -> Self {
        use alignest_ident::IdentError as E;
        match e {
            E::Config(m) => CliError::Config(m),
            E::Io { path, message } => CliError::Io { path, message },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
