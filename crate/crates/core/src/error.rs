use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("distribution is not normalized (sum = {0})")]
    NotNormalized(f64),

    #[error("invalid {kind} index {value}: {reason}")]
    InvalidIndex {
        kind: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("threshold {0} is outside 0..=254")]
    ThresholdOutOfRange(u8),

    #[error("no feasible threshold: the histogram occupies a single gray level")]
    Infeasible,

    #[error("sweep table is empty")]
    EmptyTable,

    #[error("sweep tables do not share an index grid")]
    GridMismatch,

    #[error("invalid sweep table: {0}")]
    InvalidTable(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
