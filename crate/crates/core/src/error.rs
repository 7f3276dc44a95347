use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("template has no positive maximum to threshold")]
    EmptyTemplate,

    #[error("region of interest is empty")]
    EmptyMask,

    #[error("voigt span too small: profile at the span edge is {edge:.3e} of peak (limit {limit:.1e})")]
    VoigtSpan { edge: f64, limit: f64 },

    #[error("width matching did not converge for fwhm {fwhm}: {reason}")]
    NoConvergence { fwhm: f64, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the failure stems from user-supplied configuration rather than
    /// the numerics or the filesystem.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_) | Error::InvalidParameter { .. } | Error::Config(_)
        )
    }
}
