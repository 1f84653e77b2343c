use thiserror::Error;

/// Errors raised by the set calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed set text at byte {position}: {message}")]
    MalformedText { position: usize, message: String },

    #[error("{bottom} is not at the bottom of {set}")]
    NotABottom { set: String, bottom: String },

    #[error("removing the top is ambiguous: {count} distinct witnesses")]
    AmbiguousWitness { count: usize },

    #[error("expected a unique maximum, found {count} candidates")]
    NotUnique { count: usize },

    #[error("the empty set has no maximal constituents")]
    EmptyHasNoMaximal,

    #[error("no constituent satisfies the requested condition")]
    NoneFound,

    #[error("structure cannot be realized as a set: {0}")]
    Unrealizable(String),

    #[error("invalid structure graph: {0}")]
    InvalidGraph(String),

    #[error("not a {scheme} numeral: {set}")]
    NotANumeral { scheme: &'static str, set: String },

    #[error("nothing at position {0}")]
    NoSuchPosition(String),

    #[error("a tuple needs at least one entry")]
    EmptyTuple,

    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("terminals of the top and bottom structure do not match")]
    TerminalMismatch,

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("not a {kind} structure: {reason}")]
    NotAStructure { kind: &'static str, reason: String },

    #[error("search budget of {0} candidates exceeded")]
    SearchBudgetExceeded(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
