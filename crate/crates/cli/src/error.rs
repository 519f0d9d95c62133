use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] zbsplinet::Error),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {reason}")]
    Input { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Config(_) => "InvalidConfig",
            CliError::Input { .. } => "InvalidInput",
            CliError::Io { .. } => "Io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn input(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        CliError::Input {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
