use thiserror::Error;

/// Errors raised anywhere in the library. Each variant maps onto one of the
/// CLI exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed group spec: {0}")]
    Spec(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("{0}")]
    Math(String),
    #[error("{what} budget exceeded (limit {limit})")]
    Budget { what: &'static str, limit: usize },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 2,
            Error::Parse { .. } | Error::Spec(_) => 3,
            _ => 1,
        }
    }

    /// Stable machine-readable code used in JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse_error",
            Error::Spec(_) => "malformed_spec",
            Error::InvalidGroup(_) => "invalid_group",
            Error::NotHomomorphism(_) => "not_homomorphism",
            Error::Math(_) => "math_failure",
            Error::Budget { .. } => "budget_exceeded",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
