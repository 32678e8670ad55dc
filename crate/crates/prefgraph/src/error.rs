use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex: {0}")]
    DuplicateVertex(String),
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("self-preference on vertex: {0}")]
    SelfPreference(String),
    #[error("arc weight must be positive, got {0}")]
    NonpositiveWeight(f64),
    #[error("vertex sets differ: {left:?} vs {right:?}")]
    VertexSetMismatch { left: Vec<String>, right: Vec<String> },
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("empty graph list")]
    EmptyGraphList,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("sequence does not match graph vertices: {0}")]
    SequenceMismatch(String),
    #[error("exact search limited to {limit} vertices, graph has {actual}")]
    ExactOverThreshold { limit: usize, actual: usize },
    #[error("input graph contains a cycle")]
    CyclicInput,
    #[error("rankings do not cover the same identifiers: {0}")]
    IdentifierSetMismatch(String),
    #[error("ranking contains tied entries: {0}")]
    TiedRanking(String),
    #[error("need at least {need} entries, got {got}")]
    TooFewEntries { need: usize, got: usize },
    #[error("empty ranking profile")]
    EmptyProfile,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("judgment error: {0}")]
    InvalidJudgment(String),
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
