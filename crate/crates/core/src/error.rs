use thiserror::Error;

/// Errors raised by every construction in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown quantifier `{0}`")]
    UnknownQuantifier(String),

    #[error("unknown numerical predicate `{0}`")]
    UnknownPredicate(String),

    #[error("predicate `{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("variable `{0}` occurs both free and bound")]
    VariableClash(String),

    #[error("invalid marked word: {0}")]
    InvalidMarkedWord(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("{stage}: size cap of {limit} exceeded")]
    CapExceeded { stage: String, limit: usize },

    #[error("point is outside the carrier")]
    PointOutsideCarrier,

    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("not compilable: {0}")]
    NotCompilable(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(stage: impl Into<String>, limit: usize) -> Self {
        Error::CapExceeded {
            stage: stage.into(),
            limit,
        }
    }
}
