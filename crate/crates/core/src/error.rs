use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numeric core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has no entries")]
    EmptyMatrix,

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: {expected} vs {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max |U^dagger U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("Kraus operators are not trace preserving (max |sum K^dagger K - I| = {0:e})")]
    NotTracePreserving(f64),

    #[error("channel has no Kraus operators")]
    NoKrausOperators,

    #[error("depolarizing parameter p = {p} outside [0, {max}]")]
    DepolarizingOutOfRange { p: f64, max: f64 },

    #[error("Kraus rank {rank} outside [1, {max}]")]
    KrausRankOutOfRange { rank: usize, max: usize },

    #[error("operator basis invalid: {0}")]
    InvalidBasis(String),

    #[error("preparation states are not an operator basis (smallest Gram eigenvalue {0:e})")]
    DegeneratePreparation(f64),

    #[error("linear system is singular")]
    Singular,

    #[error("expected {expected} items, got {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("sample count must be positive")]
    NoSamples,
}
