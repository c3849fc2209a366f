use thiserror::Error;

use crate::densec::DenseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dense(#[from] DenseError),
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("|Theta| = {theta:e} is below the degeneracy floor {floor:e}; use the numeric eigensolver")]
    DegenerateTheta { theta: f64, floor: f64 },
    #[error("closed-form eigenstates need a nonzero coupling omega")]
    OmegaZero,
    #[error("2*lambda coincides with i*eta_minus (trivial coherence branch)")]
    TrivialBranch,
    #[error("parameters are off the coalescence locus (eta_plus residual {residual:e})")]
    OffLocus { residual: f64 },
    #[error("no sign change of the leading imaginary part over [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("zero vector cannot be gauge fixed")]
    ZeroVector,
    #[error("time grid must be increasing from 0")]
    BadGrid,
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
