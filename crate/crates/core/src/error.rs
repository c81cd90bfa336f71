use thiserror::Error;

/// Errors raised by the channel and entropy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not hermitian (max |M - M^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("trace mismatch: {first} vs {second}")]
    TraceMismatch { first: f64, second: f64 },

    #[error("invalid simplex point: {0}")]
    InvalidSimplex(String),

    #[error("parameter t = {t} is outside the completely positive range [{lo}, {hi}]")]
    NotCp { t: f64, lo: f64, hi: f64 },

    #[error("negative eigenvalue {0:e} in a state spectrum")]
    NegativeEigenvalue(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
