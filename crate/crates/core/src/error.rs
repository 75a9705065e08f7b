use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("index {index} out of range for {len} {what}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("{what} requires {requested} qubits, above the cap of {cap}")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn check_index(what: &'static str, index: usize, len: usize) -> Result<()> {
        if index < len {
            Ok(())
        } else {
            Err(Error::OutOfRange { what, index, len })
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
