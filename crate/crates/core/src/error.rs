use std::path::PathBuf;

use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit reports.
///
/// The variants map onto three broad classes used by the command line:
/// requests outside what a routine supports (`Capability`, `Domain`, `Parse`),
/// numerical breakdowns (`Numeric`), and table file problems.
#[derive(Debug, Error)]
pub enum Error {
    /// The request is outside the supported range of a routine (e.g. too many points).
    #[error("capability error: {0}")]
    Capability(String),

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration or evaluation broke down numerically.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: unsupported table version {found}", path.display())]
    VersionMismatch { path: PathBuf, found: String },

    #[error("{}:{line}: malformed line: {message}", path.display())]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("rule n={n} violates invariant: {invariant}")]
    InvariantViolation { n: usize, invariant: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
