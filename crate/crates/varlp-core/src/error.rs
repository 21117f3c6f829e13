use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("point outside the open unit ball (|z|^2 = {norm_sqr})")]
    OutsideBall { norm_sqr: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ball family is empty: {0}")]
    EmptyFamily(String),
    #[error("region contains no quadrature node")]
    EmptyRegion,
    #[error("non-finite value at node {node}: {what}")]
    NonFinite { node: usize, what: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("norm bracket not found within {0} doublings")]
    BracketNotFound(u32),
    #[error("exponent {value} at node {node} violates declared bounds [{lo}, {hi}]")]
    ExponentOutOfBounds { node: usize, value: f64, lo: f64, hi: f64 },
    #[error("weight not strictly positive at node {node}: {value}")]
    NonPositiveWeight { node: usize, value: f64 },
    #[error("field belongs to a different grid")]
    GridMismatch,
    #[error("corpus is empty or all-zero")]
    EmptyCorpus,
    #[error("non-integrable input: {0}")]
    NonIntegrable(String),
    #[error("dual routes disagree: {a} vs {b}")]
    RouteMismatch { a: f64, b: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidParameter(String::from(msg))
}
