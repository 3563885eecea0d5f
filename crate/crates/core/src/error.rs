use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at x = {0}")]
    GammaPole(f64),

    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series, quadrature or ODE integration stopped before reaching the
    /// requested tolerance.
    #[error("{what} did not converge (achieved {achieved:e})")]
    Convergence { what: &'static str, achieved: f64 },

    #[error("metric is degenerate at r = {r}")]
    DegeneratePoint { r: f64 },

    #[error("assembly failed: {0}")]
    Assembly(String),

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
