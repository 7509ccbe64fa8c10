//! Error types shared by every module.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by evaluation, sampling and checking routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested Bernstein measure has no density (point mass or null).
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    /// An iterative scheme exhausted its budget. Carries the best estimate
    /// so callers can decide whether the partial value is still usable.
    #[error("numerical failure: {context} (partial value {partial:.6e}, est. error {abs_err:.3e})")]
    NumericalFailure {
        context: String,
        partial: f64,
        abs_err: f64,
    },

    /// A caller-supplied object violated its stated contract
    /// (e.g. a non-monotone CDF handed to the KS statistic).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Unknown check name or malformed request in the suite runner.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Exit-code class used by the command line front end:
    /// 2 for domain/usage problems, 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::DegenerateMeasure(_) | Error::Usage(_) | Error::Contract(_) => 2,
            Error::NumericalFailure { .. } => 3,
        }
    }
}
