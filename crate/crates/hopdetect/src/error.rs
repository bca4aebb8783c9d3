use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] hopdetect_core::Error),
    #[error("budget too small: every node was allocated zero bits")]
    Infeasible,
}

impl Error {
    /// Process exit code: 3 for an infeasible budget, 2 for everything the
    /// caller can fix in their arguments or files.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Infeasible => 3,
            _ => 2,
        }
    }
}
