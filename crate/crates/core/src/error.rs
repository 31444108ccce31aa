use thiserror::Error;

/// Errors raised by tensor construction, the solvers and the classifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} is too small (need n >= 2)")]
    DimensionTooSmall(usize),

    #[error("dimension {n} is too large for {what} (max {max})")]
    DimensionTooLarge { n: usize, max: usize, what: &'static str },

    #[error("expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry at index ({}, {}, {}, {})", .0[0] + 1, .0[1] + 1, .0[2] + 1, .0[3] + 1)]
    NonFiniteEntry([usize; 4]),

    #[error(
        "symmetry violation at ({}, {}, {}, {}): deviation {deviation:e}",
        .index[0] + 1, .index[1] + 1, .index[2] + 1, .index[3] + 1
    )]
    SymmetryViolation { index: [usize; 4], deviation: f64 },

    #[error("tensor has a negative entry {value:e} at ({}, {}, {}, {})", .index[0] + 1, .index[1] + 1, .index[2] + 1, .index[3] + 1)]
    NotNonnegative { index: [usize; 4], value: f64 },

    #[error("unfolding is not symmetric (deviation {0:e})")]
    AsymmetricUnfolding(f64),

    #[error("matrix is not symmetric (deviation {0:e})")]
    Asymmetric(f64),

    #[error("unfolding is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("power iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("condition {id} is not applicable: {reason}")]
    ConditionInapplicable { id: String, reason: String },

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
