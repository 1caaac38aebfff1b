use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed data: out-of-range indices, wrong table sizes, mismatched spaces.
    #[error("input error: {0}")]
    Input(String),

    #[error("carrier {carrier} exceeds the enumeration bound {bound}")]
    Capacity { carrier: usize, bound: usize },

    #[error("operator output {0:?} is not an ideal of the target relation")]
    OperatorInvalid(Vec<usize>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An action table that is not exactly total on the pullback domain.
    #[error("action domain error: {0}")]
    Domain(String),

    /// The input parsed but breaks the laws of its kind.
    #[error("{what} is invalid: {report}")]
    Invalid { what: &'static str, report: Report },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn require_valid(what: &'static str, report: Report) -> Result<()> {
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::Invalid { what, report })
        }
    }
}
