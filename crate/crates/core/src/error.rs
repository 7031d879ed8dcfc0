use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("layer {layer} sampled size {size} exceeds node count {n}")]
    LayerTooLarge { layer: u64, size: u64, n: u64 },

    /// An enumeration or brute-force routine was asked to run past its size cap.
    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("schema error: missing column `{0}`")]
    MissingColumn(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
