use std::path::PathBuf;

use forge_core::eval::InvalidLabel;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown annotator {0:?}")]
    UnknownAnnotator(String),
    #[error("unknown pair {0:?}")]
    UnknownPair(String),
    #[error(transparent)]
    InvalidLabel(#[from] InvalidLabel),
    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{0}")]
    Config(String),
}
