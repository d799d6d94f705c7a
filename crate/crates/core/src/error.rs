use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state `{0}` has an empty color set")]
    EmptyColorSet(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("no initial state")]
    NoInitialState,
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("the observation alphabet is empty")]
    EmptyAlphabet,
    #[error("state cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not complete")]
    NotComplete,
    #[error("no reachable accepting state in the automaton family")]
    NoAcceptingState,
    #[error("{what} exceeds the supported maximum of {max}")]
    TooLarge { what: &'static str, max: usize },
    #[error("search budget exhausted before an answer was found")]
    BudgetExhausted,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable kebab-case identifier, used for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyColorSet(_) => "empty-color-set",
            Error::UnknownState(_) => "unknown-state",
            Error::UnknownSymbol(_) => "unknown-symbol",
            Error::UnknownColor(_) => "unknown-color",
            Error::NoInitialState => "no-initial-state",
            Error::Duplicate { .. } => "duplicate",
            Error::EmptyAlphabet => "empty-alphabet",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::NotDeterministic => "not-deterministic",
            Error::NotComplete => "not-complete",
            Error::NoAcceptingState => "no-accepting-state",
            Error::TooLarge { .. } => "too-large",
            Error::BudgetExhausted => "budget-exhausted",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
