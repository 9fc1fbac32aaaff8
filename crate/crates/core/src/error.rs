//! Error type shared by every analysis module.

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input violated a domain precondition (out-of-range probability,
    /// nonpositive scale, non-finite value, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A root-finding bracket did not enclose a sign change.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// An iterative method exhausted its iteration budget.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// No feasible solution exists under the stated constraints.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A composite input (e.g. a simulation plan) failed validation.
    #[error("invalid input: {0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks that `value` is a probability strictly inside (0, 1).
pub(crate) fn check_unit_open(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must lie strictly in (0, 1), got {value}"
        )))
    }
}

/// Checks that `value` is finite and strictly positive.
pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}
