use thiserror::Error;

/// Errors produced while preparing or driving a matcher.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern must not be empty")]
    EmptyPattern,

    #[error("input string must not be empty")]
    EmptyInput,

    #[error("input contains a wildcard at index {0}")]
    UnexpectedWildcard(usize),

    #[error("pattern length {len} exceeds the exact search cap of {cap}")]
    AboveExactCap { len: usize, cap: usize },

    #[error("cannot remove {removed} characters from a fingerprint of length {len}")]
    LengthUnderflow { len: u64, removed: u64 },

    #[error("candidate {pos} arrived out of order (expected {expected})")]
    OutOfOrder { pos: usize, expected: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
