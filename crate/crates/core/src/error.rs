use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("atom {index} is the zero vector")]
    ZeroAtom { index: usize },
    #[error("atom {index} has norm {norm}, more than 1e-6 away from 1")]
    NormViolation { index: usize, norm: f64 },
    #[error("atoms {first} and {second} coincide up to sign")]
    DuplicateAtom { first: usize, second: usize },
    #[error("no dictionary with cumulative coherence <= {target} found after {attempts} attempts (best {best})")]
    TargetUnreachable {
        target: f64,
        attempts: usize,
        best: f64,
    },
    #[error("atom index {index} out of range for a dictionary of {count} atoms")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("representation bound to `{found}` used with dictionary `{expected}`")]
    DictionaryMismatch { expected: String, found: String },
    #[error("exponent p = {0} outside [1, 2)")]
    BadExponent(f64),
    #[error("sparsity {sparsity} invalid for a dictionary of {count} atoms")]
    SparsityTooLarge { sparsity: usize, count: usize },
    #[error("invalid amplitude range [{low}, {high}]")]
    BadAmplitude { low: f64, high: f64 },
    #[error("representation is empty")]
    EmptyRepresentation,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("tracked representation diverged from the residual at step {step} (gap {gap})")]
    TrackingInconsistent { step: usize, gap: f64 },
    #[error("Gram matrix is singular on the support (pivot {pivot} at position {position})")]
    SingularGram { position: usize, pivot: f64 },
    #[error("check requires a {expected} trace")]
    WrongAlgorithm { expected: &'static str },
    #[error("insufficient steps: need {needed}, have {available}")]
    InsufficientSteps { needed: usize, available: usize },
    #[error("oracle search over {combinations} supports exceeds the limit of {limit}")]
    TooLarge { combinations: u128, limit: u128 },
    #[error("every support of size {0} is singular")]
    NoFeasibleSupport(usize),
    #[error("invalid stop rule: {0}")]
    BadStopRule(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
