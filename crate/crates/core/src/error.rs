use thiserror::Error;

/// Errors raised by the solvers, estimators and exporters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid Laguerre order {0}: must exceed -1")]
    InvalidOrder(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("coefficient magnitude out of range (ln|c| = {log_magnitude:.3}); use the log-domain coefficients")]
    Magnitude { log_magnitude: f64 },

    #[error("infeasible: {0}")]
    Feasibility(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error(
        "quadrature did not reach the requested accuracy: estimate {estimate}, error {error:e}"
    )]
    Accuracy { estimate: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
