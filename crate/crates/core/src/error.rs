use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: char, rank: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    /// A configured cap was exceeded; callers surface this as an inconclusive verdict.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("unsupported central charge {0}")]
    UnsupportedCentralCharge(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
