use thiserror::Error;

use crate::model::Coalition;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: duplicate coalition {coalition}")]
    DuplicateCoalition { line: usize, coalition: Coalition },

    #[error("singleton {{{agent}}} is not listed")]
    MissingSingleton { agent: usize },

    #[error(
        "coalition {coalition} is not individually rational (agent {agent} prefers to stay alone)"
    )]
    NotIndividuallyRational { coalition: Coalition, agent: usize },

    #[error("agent index {agent} out of range for {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("coalition {coalition} has negative utility")]
    NegativeUtility { coalition: Coalition },

    #[error("rational arithmetic overflow")]
    Overflow,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("coalition {0} is not listed in the instance")]
    UnlistedCoalition(Coalition),

    #[error("psi vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("coalition {0} has more than two members")]
    CoalitionTooLarge(Coalition),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ratio is unbounded: worst-case stable welfare is zero")]
    Unbounded,
}

pub type Result<T> = std::result::Result<T, Error>;
