use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
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
    #[error("config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid sweep: {field}: {reason}")]
    Sweep { field: &'static str, reason: String },
    #[error("invalid {field}: {reason}")]
    Argument { field: &'static str, reason: String },
    #[error(transparent)]
    Core(#[from] pinchsec_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
