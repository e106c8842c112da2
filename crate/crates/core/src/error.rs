use thiserror::Error;

/// Errors produced by the mvbandit library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    /// Sample statistics were requested from an empty accumulator.
    #[error("no observations recorded")]
    NoData,

    #[error("unsupported distribution family for this operation: {0}")]
    UnsupportedFamily(&'static str),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("policy configuration error: {0}")]
    PolicyConfig(String),

    #[error("enumeration exceeded branch budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },

    #[error("policy `{0}` draws internal randomness and cannot be enumerated")]
    StochasticPolicy(String),

    #[error("at least two Monte-Carlo runs are required, got {0}")]
    TooFewRuns(usize),

    #[error("regret bound does not apply: {0}")]
    TheoremInapplicable(String),

    #[error("reports come from different episode ensembles")]
    MismatchedEnsembles,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
