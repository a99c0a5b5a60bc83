use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("degenerate (zero-length) vector")]
    DegenerateVector,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("ill-posed query: {0}")]
    IllPosed(String),

    #[error("unknown gain estimator '{0}'")]
    UnknownEstimator(String),

    #[error("integration diverged at step {step} (t = {time} s)")]
    Divergence { step: usize, time: f64 },

    #[error("clock went backwards: {now} s after {last} s")]
    ClockRegression { now: f64, last: f64 },
}

pub(crate) fn ensure_finite(value: f64, name: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(name))
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
