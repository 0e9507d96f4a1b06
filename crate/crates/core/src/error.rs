use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The object violates its own structural invariants (duplicate labels,
    /// out-of-range indices, wrong block sizes). Distinct from a failed
    /// verification verdict.
    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("order v = {0} is not congruent to 1 or 4 mod 12")]
    Inadmissible(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("incompatible inputs: {0}")]
    Mismatch(String),

    #[error("unknown id `{id}` (nearest: {nearest})")]
    UnknownId { id: String, nearest: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
