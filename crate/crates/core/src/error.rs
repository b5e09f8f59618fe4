use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Elements or multisets from different groups were combined, or a
    /// group description violates the divisibility chain.
    #[error("structural error: {0}")]
    Structure(String),

    #[error("unsupported group: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An exhaustive search visited more nodes than allowed. The search never
    /// returns a truncated answer.
    #[error("search budget of {budget} nodes exhausted")]
    Budget { budget: u64 },

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
