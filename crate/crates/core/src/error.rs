use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bad reduction at p = {0}")]
    BadReduction(u64),

    #[error("p = {0} ramifies in the extension")]
    Ramified(u64),

    #[error("matrix is not in USp(4): {what} deviation {norm:.3e}")]
    NotSymplectic { what: &'static str, norm: f64 },

    #[error("character of {irrep} is not class-determined on component {component}: {reason}")]
    NotClassDetermined {
        irrep: String,
        component: String,
        reason: String,
    },

    #[error("cache mismatch: {0}")]
    CacheMismatch(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
