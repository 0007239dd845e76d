//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by constructors and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),

    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("weights sum to {sum}, outside the normalization tolerance")]
    NotNormalized { sum: f64 },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("order {0} is outside the admissible range")]
    BadAlpha(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("every output symbol is excluded by some input")]
    AllZero,

    #[error("the requested quantity is infinite")]
    Infinite,

    #[error("solver did not converge; best sandwich [{lower}, {upper}]")]
    NoConvergence { lower: f64, upper: f64 },

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("reference distribution has empty support after masking")]
    DegenerateSupport,

    #[error("covariance matrix is singular, ill-conditioned or not symmetric")]
    SingularCovariance,

    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("output failed: {0}")]
    Output(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
