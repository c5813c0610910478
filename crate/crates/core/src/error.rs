use thiserror::Error;

/// Failure modes of the forward and inverse pipelines.
///
/// Complex payloads are reported as `f64` pairs so the type is scalar-agnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("normalization violation: {0}")]
    NormalizationViolation(String),
    #[error("p1 and p2 share the root {re}{im:+}i")]
    CommonRoot { re: f64, im: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("integration failed at lambda = {re}{im:+}i: {reason}")]
    StepFailure { re: f64, im: f64, reason: String },
    #[error("root loss in Re lambda in [{lo}, {hi}]: argument principle counts {expected}, refinement found {found}")]
    RootLoss { lo: f64, hi: f64, expected: i64, found: i64 },
    #[error("lambda = {re}{im:+}i is within tolerance of a pole of the Weyl function")]
    PoleProximity { re: f64, im: f64 },
    #[error("design matrix condition estimate {cond:e} exceeds {limit:e}")]
    IllConditioned { cond: f64, limit: f64 },
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("eigenvalues {i} and {j} coincide within tolerance")]
    DuplicateEigenvalue { i: usize, j: usize },
    #[error("rank deficient: numerical rank {rank} of {dim}, singular value ratio {ratio:e}")]
    RankDeficient { rank: usize, dim: usize, ratio: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
