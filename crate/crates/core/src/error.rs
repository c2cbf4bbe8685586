use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while building, validating or pricing a barrier problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("correlation matrix of regime {regime} is not positive semi-definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { regime: usize, min_eigenvalue: f64 },

    #[error("spot of asset {asset} ({spot}) is not strictly inside the regime-0 barriers")]
    SpotOutsideBarrier { asset: usize, spot: f64 },

    #[error("asset {asset} has no active barrier in this interval")]
    NoActiveBarrier { asset: usize },

    #[error("closed form not applicable: {0}")]
    Analytic(String),

    #[error("convergence fit needs at least 3 usable points, got {usable}; increase the path count")]
    TooFewPoints { usable: usize },

    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
