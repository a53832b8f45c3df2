use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the input was
/// well formed but violates a precondition or exceeds a search budget.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("hyperedge #{0} is empty")]
    EmptyEdge(usize),

    #[error("hyperedge #{0} repeats a vertex")]
    RepeatedVertex(usize),

    #[error("the two vertices must differ (got {0} twice)")]
    SameVertex(usize),

    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("hypergraph is not uniform")]
    NotUniform,

    #[error("hypergraph is disconnected")]
    Disconnected,

    #[error("{what}: budget exceeded (limit {limit})")]
    Budget { what: &'static str, limit: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("matrix is not a valid density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("no root in the bracket")]
    NoRoot,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
