use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive curvature along the step (s'y <= 0)")]
    NonPositiveCurvature,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degenerate stepsize data: {0}")]
    Degenerate(&'static str),
    #[error("vectors are numerically linearly dependent")]
    LinearDependence,
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),
    #[error("search direction is not a descent direction (g'd = {0})")]
    NonDescentDirection(f64),
    #[error("line search failed after {backtracks} backtracks")]
    LineSearchFailure { backtracks: usize },
}
