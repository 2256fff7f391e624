use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar or structured input fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structurally invalid input (bad grid, mismatched lengths, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A model could not be fitted from the data provided.
    #[error("unfit error: {0}")]
    Unfit(String),

    /// Numerical failure (singular system after regularization, overflow).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Filesystem failure while reading or writing an artifact.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
