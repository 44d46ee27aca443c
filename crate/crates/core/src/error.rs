use thiserror::Error;

use crate::kernel::Element;

/// Errors raised by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("factor mismatch: {0} vs {1}")]
    FactorMismatch(String, String),
    #[error("invalid factor: {0}")]
    InvalidFactor(String),
    #[error("coordinate length {got} does not match factor dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point outside the open unit ball (norm {norm})")]
    OutsideBall { norm: f64 },
    #[error("singular operator: {0}")]
    Singular(String),
    #[error("not a tripotent (residual {residual:.3e}, norm {norm:.6})")]
    NotTripotent { residual: f64, norm: f64 },
    #[error("frame is not orthogonal (pair {i},{j}, residual {residual:.3e})")]
    NonOrthogonalFrame { i: usize, j: usize, residual: f64 },
    #[error("invalid horofunction data: {0}")]
    InvalidHorofunction(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize, last: Box<Element> },
    #[error("bisection bracket could not be established for x with norm {norm}")]
    Bracket { norm: f64 },
    #[error("frames could not be aligned: {0}")]
    Unalignable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
