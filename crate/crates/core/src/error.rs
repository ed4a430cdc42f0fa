use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient sequence is empty")]
    EmptySeries,

    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },

    #[error("series is not normalized: {0}")]
    NotNormalized(&'static str),

    #[error("cannot divide: denominator has vanishing linear coefficient")]
    DivisionImpossible,

    #[error("point {0} lies outside the open unit disk")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("every grid point was skipped (denominator vanished or left the domain)")]
    EvaluationDegenerate,

    #[error("witness is not a member of its class ({0})")]
    WitnessNotInClass(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("malformed coefficient CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
