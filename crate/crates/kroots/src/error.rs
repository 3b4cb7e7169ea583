use thiserror::Error;

/// Error taxonomy shared by the whole crate.
///
/// `Params` covers invalid or mismatched space parameters, `NotAKRoot`
/// covers factor lists that fail the k-root shape (repeated indices, out of
/// range, wrong factor count), `Contract` covers precondition violations of
/// individual operations, `InvalidLabel` covers malformed label words, and
/// `Parse` carries the byte offset of a syntax error in the expression
/// grammar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("not a k-root: {0}")]
    NotAKRoot(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    pub fn params(msg: impl Into<String>) -> Self {
        Error::Params(msg.into())
    }

    pub fn not_a_kroot(msg: impl Into<String>) -> Self {
        Error::NotAKRoot(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn invalid_label(msg: impl Into<String>) -> Self {
        Error::InvalidLabel(msg.into())
    }

    pub fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
