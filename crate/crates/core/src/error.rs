use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Structural problem with an input value (wrong length, bad letter, ...).
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("n = {n} is outside the supported range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },

    /// Two critical positions (points, bisectors, antipodes) coincide or are too close.
    #[error("configuration is not in generic position: {0}")]
    NonGenericConfiguration(String),

    #[error("word {0} has a non-interlacing signature and cannot be realized")]
    NotRealizable(String),

    #[error("unknown statistic or closed form `{0}`")]
    UnknownStatistic(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
