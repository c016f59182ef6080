use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    /// The law has standard deviation zero, so no normal approximation exists.
    #[error("law has standard deviation 0; a normal approximation needs sigma > 0")]
    DegenerateLaw,

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
