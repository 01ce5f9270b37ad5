use thiserror::Error;

/// Errors shared by generators, oracles, samplers and the verification code.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: out-of-range ids, bad parameters, size caps.
    #[error("invalid input: {0}")]
    Input(String),

    /// The requested object cannot exist (odd degree sum, impossible bridge, ...).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The oracle has already answered its full query budget.
    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    /// A randomized construction ran out of retries.
    #[error("generation failed: {0}")]
    GenerationFailed(String),

    /// The certified sampler cannot reach the requested accuracy for these parameters.
    #[error("requested accuracy {eps:e} is below what the certified sampler supports here ({reason})")]
    PrecisionUnavailable { eps: f64, reason: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn infeasible<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Infeasible(msg.into()))
}
