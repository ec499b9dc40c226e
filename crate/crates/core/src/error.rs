use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the workbench can report.
///
/// The variants split along the CLI exit-code contract: usage and
/// configuration problems are the caller's fault, domain and parse problems
/// come from the data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A non-positive measurement reached a ratio or mean.
    #[error("domain error: {indicator} of {algorithm} is {value}, expected a positive value")]
    Domain {
        algorithm: String,
        indicator: String,
        value: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("environment error: {0}")]
    Environment(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors that originate in the measurements rather than in
    /// how the tool was invoked.
    pub fn is_data_error(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Parse { .. })
    }
}
