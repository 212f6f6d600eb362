use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("grid is not uniform")]
    NonUniform,
    #[error("boundary magnitude {magnitude:e} exceeds the truncation limit {limit:e}")]
    Truncation { magnitude: f64, limit: f64 },
    #[error("zero-frequency bin carries relative mass {0:e}")]
    ZeroBin(f64),
    #[error("input spectrum has relative mass {0:e} in the band around xi_n = 0")]
    NotPhi(f64),
    #[error("point {0} lies outside the offset grid")]
    OutOfRange(f64),
    #[error("direction too close to the equator: |theta_n| = {0:e}")]
    Equator(f64),
    #[error("no analytic form available: {0}")]
    Unsupported(String),
    #[error("extrapolation did not converge: {0}")]
    NonConvergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
