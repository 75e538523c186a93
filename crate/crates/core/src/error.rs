use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("circulant connection {value} outside 1..={max}")]
    ConnectionOutOfRange { value: usize, max: usize },

    #[error("duplicate circulant connection {0}")]
    DuplicateConnection(usize),

    #[error("graph has {n} vertices, above the exact-mode cap of {cap}; use the sampler instead")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid fugacity {0:?}: must be a positive rational or float")]
    Fugacity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("n*d = {n}*{d} is odd; no {d}-regular graph on {n} vertices exists")]
    Parity { n: usize, d: usize },

    #[error("degree {d} must be below the vertex count {n}")]
    Degree { n: usize, d: usize },

    #[error("retry budget exhausted after {attempts} attempts ({rejections_simple} non-simple, {rejections_triangle} with triangles)")]
    RetryBudget {
        attempts: u64,
        rejections_simple: u64,
        rejections_triangle: u64,
    },

    #[error("graph contains a triangle; this check requires a triangle-free graph")]
    NotTriangleFree,
}

pub type Result<T> = std::result::Result<T, Error>;
