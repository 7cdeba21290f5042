use thiserror::Error;

use crate::nibble::BadEventReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex id {vertex} (graph has {n} vertices)")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("vertex {vertex} has list size {size} < required {required}")]
    ListTooShort {
        vertex: usize,
        size: usize,
        required: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: {size} outcomes exceeds enumeration limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("resampling gave up after {retries} retries with {surviving} bad events left")]
    PartitionRetries { retries: usize, surviving: usize },

    #[error("round {round} failed after {retries} retries: {report}")]
    RoundRetries {
        round: usize,
        retries: usize,
        report: Box<BadEventReport>,
    },

    #[error("strict mode refused: {0}")]
    StrictRefused(String),

    #[error("finisher budget exhausted with {} vertices uncolored", remaining.len())]
    FinisherExhausted { remaining: Vec<usize> },

    #[error("part {part}: {source}")]
    Part {
        part: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("witness structure invalid: {0}")]
    Structure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
