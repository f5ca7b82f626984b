use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A lookup fell outside a bounded table or grid.
    #[error("{what} = {value} is outside the valid interval [{min}, {max}]")]
    Range {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// An iterative procedure could not produce a result.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The damped normal equations could not be factorised.
    #[error("singular normal equations at iteration {iteration}")]
    Singular { iteration: usize },

    /// The iteration cap was reached before the stopping criteria were met.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    /// The physical regime assumed by a closed-form model does not hold.
    #[error("regime error: {0}")]
    Regime(String),

    /// Evaluation at a singular point (coincident source and observer, pole).
    #[error("singularity: {0}")]
    Singularity(String),

    /// Malformed text input.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
