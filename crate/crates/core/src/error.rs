use thiserror::Error;

/// Errors produced by the rate-region, channel and simulation code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("user ordering violated: {0}")]
    Ordering(String),

    #[error("invalid decode order: {0}")]
    Permutation(String),

    #[error("power splits must be nonnegative and sum to 1 (got sum {0})")]
    Splits(f64),

    #[error("grid too small: {name} = {size} (need at least {min})")]
    Grid {
        name: &'static str,
        size: usize,
        min: usize,
    },

    #[error("infeasible dimensions: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown scheme '{0}'")]
    UnknownScheme(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
