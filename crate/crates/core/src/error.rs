use thiserror::Error;

/// Which property of a candidate density matrix failed validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityDefect {
    /// Largest elementwise deviation from `ρ = ρ†`.
    NotHermitian { deviation: f64 },
    /// Smallest eigenvalue, below the allowed negative slack.
    NotPositive { min_eigenvalue: f64 },
    /// Trace differs from one.
    NotUnitTrace { trace: f64 },
}

impl std::fmt::Display for DensityDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotHermitian { deviation } => {
                write!(f, "not Hermitian (max |ρ - ρ†| = {deviation:e})")
            }
            Self::NotPositive { min_eigenvalue } => {
                write!(
                    f,
                    "not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
                )
            }
            Self::NotUnitTrace { trace } => write!(f, "trace {trace} differs from 1"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {d} is below 3; only odd primes are supported")]
    DimensionTooSmall { d: u64 },
    #[error("dimension 2 is excluded; only odd primes are supported")]
    EvenPrime,
    #[error("dimension {d} is composite (divisible by {factor})")]
    Composite { d: u64, factor: u64 },
    #[error("column label {b} out of range [-1, {d})")]
    ColumnOutOfRange { b: i64, d: usize },
    #[error("row label {m} out of range [0, {d})")]
    RowOutOfRange { m: i64, d: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(DensityDefect),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("value at index {index} has imaginary part {imag:e}; expected a real quantity")]
    NotReal { index: usize, imag: f64 },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
