use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag combination or value; exits with status 2 like clap's own errors.
    #[error("{0}")]
    Usage(String),

    #[error("no input files in {}", .0.display())]
    NoInputs(PathBuf),

    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: trendstat::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] trendstat::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
