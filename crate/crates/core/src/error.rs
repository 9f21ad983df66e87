use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {n} nodes")]
    OutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("edge id {id} out of range for a graph with {m} edges")]
    EdgeOutOfRange { id: usize, m: usize },
    #[error("permutation is not a bijection on 0..{0}")]
    NotABijection(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("random generation failed after {attempts} attempts")]
    GenerationFailure { attempts: usize },
    #[error("distance {l} / degree {deg} does not fit a layout with k={k}, max degree {d_max}")]
    OutOfLayout {
        l: usize,
        deg: usize,
        k: usize,
        d_max: usize,
    },
    #[error("edge distance delta {0} outside {{-1, 0, 1}}")]
    InvalidDelta(i64),
    #[error("not strongly regular: pair ({0}, {1}) violates the parameters")]
    NotStronglyRegular(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("backward called without a cached forward pass")]
    NoForwardCache,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
