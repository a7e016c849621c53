use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit code for the CLI: 1 usage/parse, 2 precondition, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 1,
            Error::DimensionMismatch(..) | Error::LengthMismatch(..) | Error::Precondition(_) => 2,
            Error::NumericalBreakdown(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
