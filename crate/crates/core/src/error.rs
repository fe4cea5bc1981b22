use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the learning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset has no variables")]
    NoVariables,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, found: usize, expected: usize },
    #[error("row {row}, column {column}: code {code} is outside arity {arity}")]
    CodeOutOfRange { row: usize, column: usize, code: usize, arity: usize },
    #[error("node index {index} out of range for {num_vars} variables")]
    InvalidIndex { index: usize, num_vars: usize },
    #[error("node {0} cannot be its own parent")]
    SelfParent(usize),
    #[error("parent set {0:?} is not strictly increasing")]
    UnsortedParentSet(Vec<usize>),
    #[error("equivalent sample size must be positive, got {0}")]
    InvalidEss(f64),
    #[error("maximum in-degree {max_indegree} must be below the number of variables {num_vars}")]
    InvalidIndegree { max_indegree: usize, num_vars: usize },
    #[error("enumeration of {requested} parent sets per node exceeds the cap of {cap}")]
    CombinatorialCap { requested: u128, cap: u128 },
    #[error("score overflow for node {child} with parents {parents:?}")]
    ScoreOverflow { child: usize, parents: Vec<usize> },
    #[error("score table for node {0} has no empty parent set")]
    MissingEmptySet(usize),
    #[error("score table for node {node} is malformed: {reason}")]
    MalformedTable { node: usize, reason: String },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("structure contains a directed cycle")]
    CyclicStructure,
    #[error("position {position} out of range for ordering of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("orderings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("reference score must be nonzero")]
    ZeroReference,
    #[error("interval {interval} exceeds the span of both snapshot series")]
    IntervalTooLarge { interval: f64 },
    #[error("snapshot series is empty")]
    EmptySeries,
    #[error("all {0} workers failed")]
    AllWorkersFailed(usize),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
