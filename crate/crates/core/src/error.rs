use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: |lambda|+|mu| = {lhs} but |nu|+N*d = {rhs}")]
    DegreeMismatch { lhs: i64, rhs: i64 },

    #[error("partition does not fit the (n, N-n) frame: part {part} > {max}")]
    FrameViolation { part: i64, max: i64 },

    #[error("input is not a regular point (coordinates must be strictly decreasing in [0,1)): {0}")]
    NotRegular(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "numerical failure: residual {residual:.3e} exceeds tolerance (raw value {value})"
    )]
    NumericalFailure { value: Complex64, residual: f64 },

    #[error("polytope is unbounded in direction {0}; construction bug")]
    Unbounded(usize),

    #[error("rigid elimination failed: {0}")]
    SingularElimination(String),

    #[error("boundary function missing value at vertex ({0}, {1})")]
    MissingBoundaryValue(i64, i64),

    #[error("labeling cache header mismatch: expected {expected}, found {found}")]
    CacheHeaderMismatch { expected: String, found: String },

    #[error("counter overflow while counting hives")]
    CountOverflow,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
