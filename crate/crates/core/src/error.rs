use thiserror::Error;

/// Errors raised by the SEFCC workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word length {0} outside supported range 2..=9")]
    InvalidLength(usize),

    #[error("bits {bits:#b} do not fit in a word of length {len}")]
    BitsOutOfRange { bits: u32, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("expected a word of length {expected}, got {actual}")]
    UnexpectedLength { expected: usize, actual: usize },

    #[error("parse error at token {token}: {message}")]
    Parse { token: usize, message: String },

    #[error("invalid construction parameters: {0}")]
    InvalidSubset(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("boolean function arity {0} exceeds the supported maximum of 10")]
    ArityTooLarge(usize),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
