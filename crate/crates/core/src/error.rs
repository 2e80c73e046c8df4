use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("wrong dimension: expected {expected}, got {actual}")]
    WrongDimension { expected: usize, actual: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid priors p1 = {p1}, p2 = {p2}: {reason}")]
    InvalidPriors { p1: f64, p2: f64, reason: String },

    #[error("not a density operator ({which}): {reason}")]
    NotDensityOperator { which: String, reason: String },

    #[error("detection operators do not form a POVM: {0}")]
    NotAPovm(String),

    #[error("vector is not normalised: norm {norm} deviates from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("vectors are not orthonormal: |<u_{i}|u_{j}> - delta| = {deviation:e} exceeds {tolerance:e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64, tolerance: f64 },

    #[error("pure state lies in the span of the mixture components; no complementary basis vector exists")]
    LinearlyDependent,

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
