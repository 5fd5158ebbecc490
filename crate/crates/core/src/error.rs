use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A denominator built from detection statistics vanished, so the
    /// requested quantity carries no information. Callers treat this as
    /// "abort, zero key".
    #[error("no statistics: {0}")]
    NoStatistics(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The |-> preparation is only meaningful for the ideal-case oracle.
    #[error("state |-> is never prepared in the protocol")]
    ForbiddenState,

    #[error("finite-key correction is infeasible: {0}")]
    InfeasibleCorrection(String),

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
