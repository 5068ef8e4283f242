use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("beta must be positive and finite, got {0}")]
    InvalidBeta(f64),

    #[error("invalid deck word (k={k}, m={m}): {reason}")]
    InvalidWord { k: i64, m: i64, reason: &'static str },

    #[error("operation not supported on the {0} surface")]
    UnsupportedSurface(&'static str),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("profile beta {profile} does not match surface beta {surface}")]
    BetaMismatch { profile: f64, surface: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("{what} = {value} outside of domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("field is not positive at ({x}, {y}): {value}")]
    NonPositiveField { x: f64, y: f64, value: f64 },

    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
