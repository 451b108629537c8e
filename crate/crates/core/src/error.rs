use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree precondition violated: {0}")]
    Degree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("root finding did not converge after {iterations} iterations (max backward error {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("non-finite value produced by {0}")]
    Overflow(String),

    #[error("degree cap exceeded: {degree} > {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// The requested witness needs a coefficient outside the Gaussian rationals.
    #[error("{0} needs a coefficient outside Q(i); retry in the approximate flavor")]
    Irrational(String),

    #[error("hypothesis failed: {what} (gap {gap:e})")]
    Hypothesis { what: String, gap: f64 },

    #[error("validation failed: {name} (residual {residual:e})")]
    Validation { name: String, residual: f64 },

    #[error("need at least {needed} points, got {got}")]
    Underdetermined { needed: usize, got: usize },

    #[error("no invariant generator found among candidates {0:?}")]
    NoGenerator(Vec<String>),

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
}
