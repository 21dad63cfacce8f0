use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed rational {0:?}")]
    InvalidRational(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge {u}-{v} is a self-loop")]
    SelfLoop { u: usize, v: usize },

    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// `block` is 1-based, in decomposition order.
    #[error("block {block} is not complete ({vertices} vertices, {edges} edges)")]
    NotBlockGraph {
        block: usize,
        vertices: usize,
        edges: usize,
    },

    #[error("set index {index} out of range for {len} sets")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("input is not a tree")]
    NotATree,

    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),

    #[error("contract violation: {0}")]
    Contract(String),
}
