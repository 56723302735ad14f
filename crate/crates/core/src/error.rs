use thiserror::Error;

/// Errors raised by the library. Every variant falls into one of three
/// families (validation, resource, consistency) which the CLI maps onto
/// its exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid conductor: {0}")]
    InvalidConductor(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {k} is not coprime to conductor {conductor}")]
    InvalidAutomorphism { k: i64, conductor: u32 },
    #[error("value {value} out of range: {what}")]
    OutOfRange { what: String, value: i64 },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }

    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Inconsistent(_))
    }

    /// 2 for bad input, 3 for an exceeded resource cap, 4 for a failed
    /// consistency check.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::Resource { .. } => 3,
            Error::Inconsistent(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
