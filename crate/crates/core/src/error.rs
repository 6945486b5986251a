use thiserror::Error;

/// Errors raised by the caterpillar laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("spine too short: m = {m}, need m ≥ 2")]
    SpineTooShort { m: usize },

    #[error("gini functional needs at least 2 weights, got {len}")]
    TooFewWeights { len: usize },

    #[error("zero total wealth: gini functional is 0/0")]
    ZeroTotalWealth,

    #[error("weights must be finite and non-negative")]
    InvalidWeight,

    #[error("{formula} is not valid for m = {m}: {reason}")]
    OutsideValidity {
        formula: &'static str,
        m: usize,
        reason: &'static str,
    },

    #[error("enumeration needs {required} states, above the guard of {bound}")]
    ResourceGuard { required: String, bound: u64 },

    #[error("graph is disconnected: node {node} unreachable from node 0")]
    Disconnected { node: usize },

    #[error("sample too small: need at least {needed}, got {given}")]
    UndersizedSample { needed: usize, given: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("zero variance: {context}")]
    ZeroVariance { context: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("raw sample retention of {requested} values exceeds the cap of {cap}")]
    RetentionCap { requested: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
