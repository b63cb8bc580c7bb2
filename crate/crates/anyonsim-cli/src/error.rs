use thiserror::Error;

/// Failures of a CLI run, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("{context}: {source}")]
    Module {
        context: String,
        #[source]
        source: anyonsim::Error,
    },
    #[error("numerical validation failed: {0}")]
    Validation(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for anything the user can fix in the configuration, 3 when a computed result fails its checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 3,
            _ => 2,
        }
    }
}

/// Attaches the configuration item being processed to a library error.
pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, anyonsim::Error> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::Module { context: what(), source })
    }
}
