use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the set on which the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Ordered arguments (`a < b`) were supplied out of order.
    #[error("ordering violation: {0}")]
    Ordering(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("entry {index} is not strictly positive")]
    NonPositive { index: usize },

    /// A floating computation produced a value that cannot be explained by
    /// roundoff (e.g. a clearly negative argument to a square root).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("quadrature failed at node {node} (t = {t}): {reason}")]
    Quadrature { node: usize, t: f64, reason: String },

    #[error("grid too coarse: need at least {needed} nodes, got {got}")]
    InsufficientGrid { needed: usize, got: usize },

    /// Two routes to the same exact quantity disagreed.
    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),
}
