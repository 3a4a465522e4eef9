use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter order violated: tau = {tau} must be below sigma = {sigma}")]
    ParameterOrder { tau: f64, sigma: f64 },

    #[error("degenerate {0}")]
    Degenerate(String),

    #[error("alpha is undefined for sigma* = {sigma_star} (requires sigma* > 1)")]
    UndefinedAlpha { sigma_star: f64 },

    #[error("input p values are not strictly increasing at index {index}")]
    Unordered { index: usize },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("solver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("non-finite function value at x = {x}")]
    NonFinite { x: f64 },
}

impl Error {
    /// True for failures of the numerical solvers, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoSignChange { .. } | Error::NonConvergence { .. } | Error::NonFinite { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
