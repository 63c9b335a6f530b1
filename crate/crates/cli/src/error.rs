use thiserror::Error;

/// Failure of a run, classified by the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("solver failed: {0}")]
    Solver(#[source] anisoflow::Error),

    #[error("diagnostics failed: {0}")]
    Diagnostics(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Diagnostics(_) | CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: &str, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    pub(crate) fn diag(context: &str, e: impl std::fmt::Display) -> Self {
        CliError::Diagnostics(format!("{context}: {e}"))
    }
}
