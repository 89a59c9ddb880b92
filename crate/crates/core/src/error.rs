use thiserror::Error;

use crate::digraph::{EdgeId, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: EdgeId, vertex: String },

    #[error("edge id {0} appears more than once")]
    DuplicateEdgeId(EdgeId),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(Vertex),

    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),

    #[error("capacity of edge {0} is negative")]
    NegativeCapacity(EdgeId),

    #[error("capacity of edge {0} is not an integer")]
    NonIntegral(EdgeId),

    #[error("the root cannot be the sink")]
    SinkIsRoot,

    #[error("the contracted set contains the root")]
    RootInSet,

    #[error("contraction target {0} is not in the contracted set")]
    TargetNotInSet(Vertex),

    #[error("edge {edge} does not enter vertex {vertex}")]
    NotAnInEdge { edge: EdgeId, vertex: Vertex },

    #[error("flow conservation fails at vertex {0}")]
    ConservationViolated(Vertex),

    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),

    #[error("edge set is not a subset of the host digraph: edge {0}")]
    NotASubgraph(EdgeId),

    #[error("not a flame: in-capacity exceeds connectivity at vertex {0}")]
    NotAFlame(Vertex),

    #[error("vertex {0} has no connectivity deficit")]
    NoDeficit(Vertex),

    #[error("vector exceeds the capacity on edge {0}")]
    NotDominated(EdgeId),

    #[error("{what}: size {actual} exceeds the bound {limit}")]
    SizeBound {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
}
