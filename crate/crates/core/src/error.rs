use thiserror::Error;

/// Errors raised by the algebra, module, measure and frame layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("algebra shape must have at least one block, and every block dimension must be >= 1")]
    InvalidShape,

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("block {block} has {found} entries, expected {expected}")]
    BlockSize {
        block: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("element is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("element is not positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("block {block} is singular (min singular value {min_singular_value:.3e})")]
    SingularBlock {
        block: usize,
        min_singular_value: f64,
    },

    #[error("operator is singular (min singular value {min_singular_value:.3e})")]
    SingularOperator { min_singular_value: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("invalid measure space: {0}")]
    InvalidMeasure(String),

    #[error("index {index} out of range for {len} nodes")]
    BadIndex { index: usize, len: usize },

    #[error("restriction leaves no nodes")]
    EmptyRestriction,

    #[error("fields live on different measure spaces")]
    SpaceMismatch,

    #[error("not a frame (lower bound {lower:.3e} <= threshold {threshold:.3e})")]
    NotAFrame { lower: f64, threshold: f64 },

    #[error("not a Riesz basis: {0}")]
    NotRiesz(String),

    #[error("exactness is only decidable on atomic measure spaces")]
    ExactnessUndecidable,
}

pub type Result<T> = std::result::Result<T, Error>;
