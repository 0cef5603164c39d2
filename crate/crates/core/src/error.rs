use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("{name} = {value} is out of range: expected {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The state norm drifted too far from 1; the step is too large.
    #[error("integration failed at t = {t:e} s: norm drift {drift:e} exceeds {limit:e}")]
    Integration { t: f64, drift: f64, limit: f64 },
}

impl Error {
    pub(crate) fn domain(
        name: &'static str,
        value: impl Into<f64>,
        expected: &'static str,
    ) -> Self {
        Error::Domain {
            name,
            value: value.into(),
            expected,
        }
    }
}
