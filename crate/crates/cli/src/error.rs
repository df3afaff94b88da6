use std::path::PathBuf;

use semilab::LabError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid config {path}: {message}")]
    Config { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report {path}: {message}")]
    MalformedReport { path: PathBuf, message: String },

    #[error(
        "TRUNCATION_INADEQUATE: t_max = {t_max} requires max_index >= {required} (dim {required_dim}), \
         above the dimension cap {cap}"
    )]
    DimensionCap {
        t_max: f64,
        required: usize,
        required_dim: usize,
        cap: usize,
    },

    #[error(transparent)]
    Lab(#[from] LabError),

    #[error("serialization: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
