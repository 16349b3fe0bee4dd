use thiserror::Error;

/// Errors raised by the library.
///
/// `Usage` and `Parse`-style problems are caller mistakes; `Internal` means a
/// mathematical consistency check failed and indicates a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice has rank {rank} in ambient rank {ambient}; a full-rank lattice is required")]
    NotFullRank { rank: usize, ambient: usize },

    #[error("vector is not a member of the lattice")]
    NotMember,

    #[error("the zero vector has no divisibility factor")]
    ZeroVector,

    #[error("invalid generator atom: {0}")]
    InvalidAtom(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
