use thiserror::Error;

/// Errors raised by the numerical and measure-theoretic routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bracket: f(lo) and f(hi) have the same sign ({0})")]
    InvalidBracket(String),

    #[error("length error: {0}")]
    Length(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("Hankel pivot collapse at index {index} ({bits} bits): {detail}")]
    PivotCollapse {
        index: usize,
        bits: u32,
        detail: String,
    },

    #[error("no tail bound recorded for moment of degree {degree}")]
    MissingTailBound { degree: usize },

    #[error("divergent series: {0}")]
    Divergent(String),

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_))
    }
}
