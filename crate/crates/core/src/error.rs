use thiserror::Error;

/// Every failure the library can surface.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inverse of zero requested")]
    InverseOfZero,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small (must be at least 2)")]
    ModulusTooSmall(u64),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension {dim} is not divisible by k = {k}")]
    IndivisibleDimension { dim: usize, k: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry {value} is not reduced modulo {modulus}")]
    EntryOutOfRange { value: u64, modulus: u64 },
    #[error("could not sample valid evaluation points after {attempts} attempts (field too small?)")]
    AlphaSamplingExhausted { attempts: usize },
    #[error("basis b = {b} outside [1, k = {k}]")]
    BadBasis { b: usize, k: usize },
    #[error("not enough shares: have {have}, need {need}")]
    NotEnoughShares { have: usize, need: usize },
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("too few workers: have N = {have}, need N >= {need} ({rule})")]
    TooFewWorkers {
        have: usize,
        need: usize,
        rule: String,
    },
    #[error("basis mismatch: expected b = {expected}, found b = {found}")]
    BasisMismatch { expected: usize, found: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown input X{0}")]
    UnknownInput(usize),
    #[error("adversary subset of size {size} exceeds t - 1 = {max}")]
    SubsetTooLarge { size: usize, max: usize },
    #[error("parameters too large for a histogram audit: {0}")]
    ParametersTooLarge(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid evaluation points: {0}")]
    InvalidAlphas(String),
}

impl Error {
    /// True for failures of the protocol itself (worker bound, degenerate
    /// points, basis bookkeeping) as opposed to malformed input or config.
    pub fn is_protocol_error(&self) -> bool {
        matches!(
            self,
            Error::TooFewWorkers { .. }
                | Error::SingularMatrix
                | Error::AlphaSamplingExhausted { .. }
                | Error::BasisMismatch { .. }
                | Error::NotEnoughShares { .. }
                | Error::ParamMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
