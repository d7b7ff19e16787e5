use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong in ratiokit.
///
/// Variants fall into three families that the CLI maps to exit codes:
/// usage (bad parameters), data (bad or insufficient input), and numerical
/// failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not square: {entries} entries for dimension {dim}")]
    NotSquare { dim: usize, entries: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |m[{row},{col}] - conj(m[{col},{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not unitary: max |(U^dag U - I)_ij| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("eigenvalue {index} has modulus {modulus} (expected 1)")]
    OffUnitCircle { index: usize, modulus: f64 },

    #[error("eigensolver failed to converge")]
    EigenSolver,

    #[error("quadrature did not converge: error estimate {estimate:e} > tolerance {tol:e}")]
    NoConvergence { estimate: f64, tol: f64 },

    #[error("Kramers pairing failed at level {index}: gap {gap:e} exceeds tolerance {tol:e}")]
    KramersMismatch { index: usize, gap: f64, tol: f64 },

    #[error("magnetization sector is empty: {n_up} up spins on {sites} sites")]
    SectorEmpty { sites: usize, n_up: usize },

    #[error("basis dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("parity blocks do not decouple: residual {residual:e}")]
    NotBlockCommuting { residual: f64 },

    #[error("gamma * N = {product} is an integer; the map is undefined")]
    DegenerateGamma { product: f64 },

    #[error("need at least {needed} levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },

    #[error("degenerate spacing at ratio index {index}")]
    DegenerateSpacing { index: usize },

    #[error("levels are not sorted or not finite at index {index}")]
    InvalidSpectrum { index: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("parse error at line {line}: {text:?}")]
    Parse { line: usize, text: String },

    #[error("duplicate level {0}")]
    DuplicateLevel(f64),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("realization {index} failed: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for exit codes and FFI status values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter(_) | Error::SectorEmpty { .. } | Error::DegenerateGamma { .. } => {
                ErrorClass::Usage
            }
            Error::TooFewLevels { .. }
            | Error::DegenerateSpacing { .. }
            | Error::InvalidSpectrum { .. }
            | Error::EmptySample
            | Error::Parse { .. }
            | Error::DuplicateLevel(_)
            | Error::MalformedReport(_)
            | Error::Io { .. }
            | Error::Json(_) => ErrorClass::Data,
            Error::NotSquare { .. }
            | Error::NonFinite { .. }
            | Error::NotHermitian { .. }
            | Error::NotUnitary { .. }
            | Error::OffUnitCircle { .. }
            | Error::EigenSolver
            | Error::NoConvergence { .. }
            | Error::KramersMismatch { .. }
            | Error::DimensionOverflow { .. }
            | Error::NotBlockCommuting { .. } => ErrorClass::Numerical,
            Error::Realization { source, .. } => source.class(),
        }
    }

    /// Process exit code: 2 usage, 3 data, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Usage => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numerical => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
