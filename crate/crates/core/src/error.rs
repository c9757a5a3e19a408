use thiserror::Error;

/// Errors produced by the estimator, the selection engine and the CLI layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("x and y have different lengths ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("need at least {needed} observations, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("input is not a permutation of 0..{len}")]
    NotAPermutation { len: usize },

    #[error("enumeration would produce more than {cap} slopes")]
    OutputBudgetExceeded { cap: usize },

    #[error("the requested interval contains no slopes")]
    EmptyInterval,

    #[error("rank {k} is outside 1..={max}")]
    RankOutOfRange { k: u64, max: u64 },

    #[error("no valid pairs: every observation is identical")]
    NoValidPairs,

    #[error("median absolute slope is infinite (ties in x dominate)")]
    DegenerateSlope,

    #[error("slope selection did not converge within {iters} iterations")]
    IterationCapExceeded { iters: usize },

    #[error("index {index} out of range for {len} observations")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("confidence interval ranks collapse to {rank} of {max}")]
    RankCollapse { rank: u64, max: u64 },

    #[error("bootstrap needed more than {limit} redraws of degenerate resamples")]
    TooManyRedraws { limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("column not found: {0}")]
    ColumnNotFound(String),

    #[error("parse error on line {line}: {message}")]
    ParseError { line: u64, message: String },

    #[error("group {group:?} has only {n} observation(s)")]
    GroupTooSmall { group: String, n: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures caused by the data being degenerate rather than malformed.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NoValidPairs
                | Error::DegenerateSlope
                | Error::RankCollapse { .. }
                | Error::TooManyRedraws { .. }
                | Error::GroupTooSmall { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
