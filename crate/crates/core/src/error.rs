use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different local groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("operation requires a finite group, but {0} is infinite")]
    InfiniteGroup(String),

    #[error("group {name} has order {order}, above the enumeration cap {cap}")]
    OrderTooLarge { name: String, order: usize, cap: usize },

    #[error("invalid element {value} for group {group}")]
    InvalidElement { group: String, value: i64 },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("cell is not available: {0}")]
    Cell(String),

    #[error("vertex {0} is on the boundary of the ball")]
    BoundaryVertex(String),

    #[error("images do not define an automorphism of the expected form: {0}")]
    NotAnAutomorphism(String),

    #[error("invalid disc diagram: {0}")]
    InvalidDiagram(String),

    #[error("loop cannot be filled inside the ball: {0}")]
    NotFillable(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}
