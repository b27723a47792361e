use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes, identifiers or point sets do not line up.
    #[error("structural error: {0}")]
    Structural(String),
    /// A caller-supplied parameter is out of range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Input values violate a mathematical hypothesis (infinite distance, zero radius, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A combinatorial size guard was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// A stated precondition was checked and found false.
    #[error("precondition failed: {message}")]
    Precondition { message: String, violations: Vec<String> },
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn parse(text: &str) -> Self {
        Error::Parse(text.to_string())
    }
}
