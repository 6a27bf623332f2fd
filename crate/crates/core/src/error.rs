use thiserror::Error;

/// Errors produced while building graphs, specs, labelings and reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range 1..={count}")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("graph is disconnected: vertex {0} is unreachable")]
    Disconnected(usize),

    #[error("invalid product descriptor `{descriptor}`: {reason}")]
    Descriptor { descriptor: String, reason: String },

    #[error("outside theorem mode: {0}")]
    NotTheoremMode(String),

    #[error("{what} has {size} vertices, above the oracle ceiling of {ceiling}")]
    CeilingExceeded {
        what: &'static str,
        size: usize,
        ceiling: usize,
    },

    #[error("cut family does not partition the host edges: {0}")]
    NotAPartition(String),

    #[error("embedding is not valid: {0}")]
    InvalidEmbedding(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
