use std::path::PathBuf;

use thiserror::Error;

/// Failures while reading a configuration file.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: not valid JSON: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: unknown key `{key}`")]
    UnknownKey { path: PathBuf, key: String },

    #[error("{path}: missing required field `{field}`")]
    MissingField { path: PathBuf, field: String },

    #[error("{path}: unknown experiment kind `{kind}`")]
    UnknownKind { path: PathBuf, kind: String },

    #[error("{path}: invalid value for `{field}`: {message}")]
    Invalid {
        path: PathBuf,
        field: String,
        message: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Core(#[from] uurlab_core::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("input file not found: {0}")]
    MissingInput(PathBuf),
}

pub type Result<T> = std::result::Result<T, CliError>;
