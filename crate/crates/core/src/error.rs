use thiserror::Error;

/// Errors raised by the library. Violations of mathematical invariants are
/// reported as data (see the various report types), not through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("term b_{index} needs {bits} bits, over the budget of {budget}")]
    BitBudgetExceeded { index: usize, bits: u64, budget: u64 },

    #[error("finite multiplier chain has only {available} terms, b_{index} requested")]
    ChainExhausted { index: usize, available: usize },

    #[error("invalid pivot descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid sequence descriptor: {0}")]
    InvalidSequence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
