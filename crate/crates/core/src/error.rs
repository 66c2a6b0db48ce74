use crate::graph::{ArcId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arc {0} does not exist")]
    UnknownArc(ArcId),

    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),

    #[error("arc id {0} is already in use")]
    DuplicateArc(ArcId),

    #[error("loop at vertex {0}: loops are not allowed")]
    Loop(VertexId),

    #[error("weights must be positive integers")]
    ZeroWeight,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{what}: budget of {limit} exhausted")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("meta graph component is not a tree ({0})")]
    NonTreeMeta(String),

    #[error("arcs do not form an elementary cycle")]
    NotACycle,

    #[error("graph is not resolvable")]
    NotResolvable,

    #[error("{0}")]
    Invalid(String),
}
