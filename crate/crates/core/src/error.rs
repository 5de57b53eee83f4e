use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("block length {block_len} is not a multiple of delay {delay}")]
    NotMultiple { block_len: usize, delay: usize },

    #[error("linear_to_db requires a positive input, got {0}")]
    NonPositive(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("{n_blocks} blocks of {symbols} symbols overflow the 64-bit symbol counter")]
    AccumulatorOverflow { n_blocks: u64, symbols: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
