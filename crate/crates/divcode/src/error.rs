use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} outside 1..=14")]
    Dimension(usize),
    #[error("length {0} outside 1..=128")]
    Length(usize),
    #[error("generator rows are linearly dependent (rank {rank} < {k})")]
    RankDeficient { rank: usize, k: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("MacWilliams transform does not divide exactly; the enumerator is inconsistent")]
    InexactDivision,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
