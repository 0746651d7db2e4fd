use thiserror::Error;

use crate::exact::Rational;

/// Errors raised anywhere in the library.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// which the CLI reports alongside the message.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not invertible: determinant {determinant} ({reason})")]
    Invertibility { determinant: String, reason: String },

    #[error("unsupported group {kind} with matrix size {size}: {reason}")]
    Construction { kind: String, size: usize, reason: String },

    #[error("not in the Lie algebra: {0}")]
    Membership(String),

    #[error("unsupported operation: {0}")]
    Capability(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("internal inconsistency: {message}")]
    Inconsistency {
        message: String,
        values: Vec<(String, Rational)>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "E_DIMENSION",
            Error::Invertibility { .. } => "E_INVERTIBILITY",
            Error::Construction { .. } => "E_CONSTRUCTION",
            Error::Membership(_) => "E_MEMBERSHIP",
            Error::Capability(_) => "E_CAPABILITY",
            Error::Parse { .. } => "E_PARSE",
            Error::Inconsistency { .. } => "E_INCONSISTENCY",
            Error::InvalidArgument(_) => "E_ARGUMENT",
        }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
