use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(qgraph_core::Error),

    #[error("{0}")]
    Core(qgraph_core::Error),

    #[error("numerical failure: non-finite value in column {column}")]
    NonFinite { column: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("verify: {failed} of {checks} checks failed")]
    VerifyFailed { failed: usize, checks: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) | CliError::NonFinite { .. } => 2,
            CliError::VerifyFailed { .. } => 3,
            _ => 1,
        }
    }
}

impl From<qgraph_core::Error> for CliError {
    fn from(e: qgraph_core::Error) -> Self {
        match e {
            qgraph_core::Error::Unconverged { .. } => CliError::Numerical(e),
            other => CliError::Core(other),
        }
    }
}
