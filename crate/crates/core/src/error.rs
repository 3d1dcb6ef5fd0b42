use thiserror::Error;

use crate::bitmatrix::MAX_NODES;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node count {0} outside supported range 1..={MAX_NODES}")]
    NodeCount(usize),

    #[error("node index {index} out of range for a graph with {n} nodes")]
    NodeIndex { index: usize, n: usize },

    #[error("bidirected edge needs two distinct endpoints, got ({0}, {0})")]
    SelfBidirected(usize),

    #[error("node counts differ: {left} vs {right}")]
    NodeCountMismatch { left: usize, right: usize },

    #[error("invalid subsampling rate: {0}")]
    InvalidRate(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance too large for exact counting: {n} nodes (limit {limit})")]
    SizeGuard { n: usize, limit: usize },

    #[error("estimation failed for variables {vars:?}: {reason}")]
    Estimation { vars: Vec<usize>, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("simulation produced a non-finite value at step {step}")]
    Simulation { step: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
