use std::path::PathBuf;

use fvcw::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Info(String),

    #[error("{path}:{line}: {message}")]
    ConfigFile {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Info(_) => "info",
            CliError::ConfigFile { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Solver(_) => "solver",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) | CliError::ConfigFile { .. } => 2,
            CliError::Io { .. } | CliError::Solver(_) => 1,
        }
    }

    /// `error: kind=<kind> message=<text>` on a single line.
    pub fn report_line(&self) -> String {
        let msg = self.to_string();
        let flat: Vec<_> = msg
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        format!("error: kind={} message={}", self.kind(), flat.join("; "))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
