use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("size limit exceeded: {what} ({value} > {limit})")]
    LimitExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("element {0} is zero and has no inverse")]
    ZeroInverse(u32),
    #[error("element index {index} out of range for q = {q}")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("malformed set spec `{spec}`: {reason}")]
    SetSpec { spec: String, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
