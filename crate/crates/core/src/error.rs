use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("outside asymptotic regime: {0}")]
    Regime(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("quadrature budget exhausted after {evaluations} evaluations (partial value {partial}, error estimate {error_estimate:e})")]
    Budget {
        partial: crate::Complex64,
        error_estimate: f64,
        evaluations: usize,
    },
    #[error("coverage: {message}")]
    Coverage {
        message: String,
        required_n: Option<u64>,
    },
    #[error("invalid record {index}: {reason}")]
    Record { index: usize, reason: String },
    #[error("fetch failed after {attempts} attempt(s): {reason}")]
    Fetch { attempts: u32, reason: String },
    #[error("schema: {0}")]
    Schema(String),
    #[error("parse error in {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn pole(msg: impl Into<String>) -> Self {
        Error::Pole(msg.into())
    }
}
