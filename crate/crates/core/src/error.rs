use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the mathematical inputs does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("not nested: {0}")]
    NotNested(String),

    #[error("singular system at step {step}: {detail}")]
    SingularStep { step: usize, detail: String },

    #[error("linear solve residual {residual:e} exceeds tolerance {tolerance:e} at step {step}")]
    Residual {
        step: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("reference cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
