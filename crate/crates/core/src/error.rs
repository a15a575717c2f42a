use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact computation would need more memory than the configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A quantile was requested inside the truncated tail of a distribution.
    #[error("quantile {u} lies in the truncated tail (tail mass {tail_mass})")]
    TruncatedTail { u: f64, tail_mass: f64 },

    /// Some improvement probability is zero, so the expected runtime is infinite.
    #[error("infinite expected runtime: improvement probability at level {level} is zero")]
    InfiniteRuntime { level: usize },

    /// A sample collection contained runs that hit their budget.
    #[error("censored runs present: {count} of {total} runs hit the budget")]
    Censored { count: usize, total: usize },

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        domain(format!("{name} = {p} is not a probability"))
    }
}

pub(crate) fn check_succ(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        domain(format!("{name} = {p} must lie in (0, 1]"))
    }
}
