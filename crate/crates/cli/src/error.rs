use std::path::PathBuf;

/// Errors raised by the runner and the command line.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Error from the learning library.
    #[error(transparent)]
    Core(#[from] ehrsev_core::Error),
    /// File system failure.
    #[error("{path}: {source}")]
    Io {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Malformed CSV.
    #[error("{path}: {source}")]
    Csv {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: csv::Error,
    },
    /// Malformed JSON.
    #[error("{context}: {source}")]
    Json {
        /// What was being read or written.
        context: String,
        /// Underlying error.
        source: serde_json::Error,
    },
    /// Invalid experiment configuration.
    #[error("config: {0}")]
    Config(String),
    /// Report tables that cannot be compared.
    #[error("comparison: {0}")]
    Compare(String),
    /// Saved model that cannot be used.
    #[error("model file: {0}")]
    Model(String),
    /// A pipeline stage failed.
    #[error("stage {stage} failed: {source}")]
    Stage {
        /// Stage name as written to the manifest.
        stage: String,
        /// Cause.
        source: Box<CliError>,
    },
}

/// Result alias for the runner.
pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

pub(crate) fn json_err(context: impl Into<String>) -> impl FnOnce(serde_json::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Json { context, source }
}
