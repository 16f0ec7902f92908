use thiserror::Error;

/// Errors produced by graph construction, local search and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distribution error: {0}")]
    Distribution(String),

    #[error("expected {expected} edge weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("edge {index} has weight {weight}; weights must be finite and strictly positive")]
    BadWeight { index: usize, weight: f64 },

    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no run of {len} light edges found (I = n - L)")]
    NoRun { len: usize },

    #[error("exact search refuses n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
