use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },

    #[error("feature file: {0}")]
    FeatureFile(String),

    #[error("model file: {0}")]
    ModelFile(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),

    #[error("zero variance: {0}")]
    ZeroVariance(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("training data must contain both classes")]
    SingleClass,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical core rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateProjection(_) | Error::ZeroVariance(_) | Error::NonFinite(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
