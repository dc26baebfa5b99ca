use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("vertex {vertex} has two outgoing edges")]
    TwoOutgoingEdges { vertex: usize },
    #[error("vertex {vertex} is grafted or a liana end but has a child")]
    DecoratedVertexHasChild { vertex: usize },
    #[error("liana label {label} decorates {count} vertices, expected exactly 2")]
    LianaMultiplicityNot2 { label: u32, count: usize },
    #[error("forest has vertices but no root (pure aroma)")]
    PureAromaForest,
    #[error("forest has {count} lianas, more than the supported {max}")]
    TooManyLianas { count: usize, max: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("size {size} exceeds the configured bound {bound}")]
    SizeBoundExceeded { size: String, bound: String },
    #[error("decoration is not finer than the target decoration")]
    NotFiner,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("forest has no connecting liana")]
    NoConnectingLiana,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("quadrature did not converge")]
    QuadratureNotConverged,
    #[error("unsupported transformation: {0}")]
    UnsupportedTransformation(String),
}

pub type Result<T> = std::result::Result<T, ForestError>;
