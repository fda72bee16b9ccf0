use thiserror::Error;

/// Library-wide error type.
///
/// Verdict-style operations (validation, certification) do not error on a
/// failing verdict; they return structured reports instead. Errors are
/// reserved for violated preconditions, exceeded capacity caps, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the operation's domain (unknown vertex, empty set, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive computation would exceed its configured cap.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A checked precondition failed, with the offending witness named.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// Text-format parse failure with 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code for the CLI: parse/usage errors exit 2, the rest 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
