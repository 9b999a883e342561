use thiserror::Error;

use crate::dist::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    Invalid(#[from] Violation),

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("variable sets overlap on {0:?}")]
    OverlappingSets(String),

    #[error("empty variable set")]
    EmptySet,

    #[error("event {var}={value} has zero probability")]
    ZeroProbabilityEvent { var: String, value: usize },

    #[error("symbol {value} is outside the alphabet of {var} (size {size})")]
    SymbolOutOfRange {
        var: String,
        value: usize,
        size: usize,
    },

    #[error("cannot merge the eavesdropper variable {0:?} with honest variables")]
    EveMerge(String),

    #[error("distribution has no eavesdropper variable")]
    NoEavesdropper,

    #[error("{0:?} is not the eavesdropper variable")]
    NotEavesdropper(String),

    #[error("{0:?} is not an honest variable")]
    NotHonest(String),

    #[error("mapping is not a bijection on the honest variables: {0}")]
    NotBijection(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("incompatible distributions: {0}")]
    Incompatible(String),

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("internal consistency error: information measure {0} is negative")]
    NegativeInformation(f64),

    #[error("honest variable {0:?} is not binary")]
    NonBinary(String),

    #[error("unsupported shape: {0}")]
    WrongArity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
