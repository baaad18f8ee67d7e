use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
///
/// Every variant maps onto a short machine-readable code (see [`Error::code`]),
/// which the CLI prints as `error: <code>: <detail>`.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the mathematical domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// Evaluation of a weight at an endpoint where it is infinite.
    #[error("singular endpoint: weight is unbounded at x = {x}")]
    SingularEndpoint { x: f64 },

    /// A caller-side precondition was violated (unsorted input, wrong lengths, ...).
    #[error("{0}")]
    Contract(String),

    /// Too few distinct sample points to determine a polynomial of the requested degree.
    #[error("rank deficient: {distinct} distinct points, need at least {needed}")]
    RankDeficient { distinct: usize, needed: usize },

    #[error("linear program {0}")]
    Lp(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) | Error::SingularEndpoint { .. } => "domain",
            Error::Contract(_) => "contract",
            Error::RankDeficient { .. } => "rank",
            Error::Lp(_) => "internal",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
