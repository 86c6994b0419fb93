use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(String),

    #[error("field index {index} out of range 1..={max}")]
    FieldIndex { index: usize, max: usize },

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("n = {n} exceeds the exact-enumeration guard n_max = {n_max}")]
    TooLarge { n: usize, n_max: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("exponent p must be >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("mollifier radius {eps} below resolution (need >= {min})")]
    BelowResolution { eps: f64, min: f64 },

    #[error("input form is not closed: relative residual {residual:.3e} exceeds {threshold:.3e}")]
    NotClosed { residual: f64, threshold: f64 },

    #[error("ball of radius {radius} is not contained in the grid box")]
    BallOutsideGrid { radius: f64 },

    #[error("solver did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
