use thiserror::Error;

/// Errors raised by the state-space operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlochError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a density operator: {0}")]
    NotAState(String),

    #[error("vectors are not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("vectors refer to different generator bases")]
    BasisMismatch,

    #[error("basis is not arranged as required: {0}")]
    WrongBasisArrangement(String),

    #[error("degenerate spectrum (eigenvalue gap {0:e})")]
    DegenerateSpectrum(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("imaginary residue {0:e} in expansion coefficient")]
    ComplexCoefficient(f64),

    #[error("need at least {min} factors, got {got}")]
    TooFewFactors { min: usize, got: usize },

    #[error("vector is not unit length (norm {0})")]
    NotUnit(f64),

    #[error("point lies outside the simplex (weight {0:e})")]
    OutsideSimplex(f64),
}

pub type Result<T> = std::result::Result<T, BlochError>;
