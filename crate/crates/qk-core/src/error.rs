use thiserror::Error;

/// Errors reported by the library.
///
/// Contract violations that can only arise from mixing sets and digraphs of
/// different orders panic instead; everything a caller can plausibly feed in
/// from the outside world surfaces here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for digraph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("set is not independent")]
    NotIndependent,

    #[error("set is not a quasi-kernel")]
    NotQuasiKernel,

    #[error("set is not a good quasi-kernel")]
    NotGoodQuasiKernel,

    #[error("digraph has a sink")]
    HasSink,

    #[error("digraph is empty")]
    EmptyDigraph,

    #[error("digraph is not semicomplete")]
    NotSemicomplete,

    #[error("digraph is not acyclic")]
    NotAcyclic,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("instance size {size} exceeds budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
