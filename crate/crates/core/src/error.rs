use thiserror::Error;

/// Errors raised by the M(2) quantization toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("chart undefined on point orbit")]
    PointOrbit,

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error(
        "mode headroom exceeded: |f_{mode}| = {magnitude:e} above the half-band limit {limit}"
    )]
    ModeHeadroom {
        mode: i64,
        magnitude: f64,
        limit: usize,
    },

    #[error("series not converged after {r_max} terms (last term norm {last_norm:e})")]
    SeriesTruncation { r_max: usize, last_norm: f64 },

    #[error("instability: reduce dt or raise N (relative norm drift {drift:e})")]
    Instability { drift: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
