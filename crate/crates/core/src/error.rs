use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unbounded region: coordinate {coordinate} has no finite {side} bound")]
    Unbounded { coordinate: usize, side: &'static str },

    #[error("could not certify boundedness of coordinate {coordinate} within the elimination budget")]
    BoundednessUndecided { coordinate: usize },

    #[error("point cap of {cap} exceeded during enumeration")]
    ResourceLimit { cap: u64 },

    #[error("invalid filling: {0}")]
    InvalidFilling(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
