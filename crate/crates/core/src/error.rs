//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by parsing, validation and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A state id that is not declared by the automaton.
    #[error("unknown state `{0}`")]
    UnknownState(String),
    /// A symbol that is not part of the alphabet.
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    /// The input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The instance is outside the class handled by the requested procedure.
    #[error("not applicable: {0}")]
    NotApplicable(String),
    /// A structural assumption (boundedness, block shape) was contradicted.
    #[error("structural error: {0}")]
    Structural(String),
    /// A configurable resource cap was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// File-system failure in the CLI layer.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code, always at least 65; 64 is reserved for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 65,
            Error::UnknownState(_) => 66,
            Error::UnknownSymbol(_) => 67,
            Error::InvalidInput(_) => 68,
            Error::NotApplicable(_) => 69,
            Error::Structural(_) => 70,
            Error::Resource(_) => 71,
            Error::Io(_) => 74,
        }
    }

    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::UnknownState(_) => "unknown-state",
            Error::UnknownSymbol(_) => "unknown-symbol",
            Error::InvalidInput(_) => "invalid-input",
            Error::NotApplicable(_) => "not-applicable",
            Error::Structural(_) => "structural",
            Error::Resource(_) => "resource",
            Error::Io(_) => "io",
        }
    }
}
