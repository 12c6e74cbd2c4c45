use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("numerical overflow while evaluating {context}")]
    Overflow { context: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid line: {0}")]
    InvalidLine(String),

    #[error("line does not meet the unit ball (distance {distance})")]
    LineMissesBall { distance: f64 },

    #[error("function vanishes on every sample of the contour")]
    IdenticallyZero,

    #[error("zero suspected on the contour of radius {radius} after {attempts} perturbations")]
    ZeroOnContour { radius: f64, attempts: usize },

    #[error("winding number failed to converge (residual {residual}) with {nodes} nodes")]
    QuadratureDiverged { residual: f64, nodes: usize },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("bisection did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("function spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
