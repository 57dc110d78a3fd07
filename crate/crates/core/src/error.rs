use corrgeo_polytope::PolytopeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin {0:?}: 2s must be a positive integer")]
    InvalidSpin(String),
    #[error("outcome {m} is not a valid outcome for spin {spin}")]
    OutcomeNotInList { m: f64, spin: String },
    #[error("angle {0} rad lies outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("no angle given for setting pair ({0}, {1})")]
    MissingAngle(String, String),
    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("cell is not a probability table: {0}")]
    NotNormalized(String),
    #[error("cell has a degenerate marginal (standard deviation zero)")]
    DegenerateCell,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not on the elliptope surface (value {0:e})")]
    NotOnSurface(f64),
    #[error("two of the directions are collinear")]
    Collinear,
    #[error("matrix is not positive semi-definite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("vector has norm {0}, expected 1")]
    NonUnitVector(f64),
    #[error("invalid raffle weights: {0}")]
    InvalidWeights(String),
    #[error("unknown setting label {0:?}")]
    UnknownSetting(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sample has zero variance")]
    ZeroVariance,
    #[error("spin {0} needs the deep mode (enable it explicitly)")]
    DeepRequired(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
