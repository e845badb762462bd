use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TmsError {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid scale {0}: must be positive")]
    InvalidScale(f64),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),
    #[error("set is not connected")]
    NotConnected,
    #[error("sets are not separated (sampled distance {0})")]
    NotSeparated(f64),
    #[error("region too large: {0} basic opens exceeds the cap of {1}")]
    TooManySets(usize, usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("constancy rule disabled: measure is not declared C-outer regular")]
    RuleDisabled,
    #[error("constancy rule not applicable: {0}")]
    RuleNotApplicable(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("insufficient hypotheses: {0}")]
    InsufficientHypotheses(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, TmsError>;
