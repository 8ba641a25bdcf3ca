use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Format(String),
    #[error("invalid config: {0}")]
    Config(String),
    /// The input is well formed but does not meet a requirement of the command.
    #[error("{0}")]
    Precondition(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Game(#[from] avclub_core::Error),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    /// Process exit code: 2 for unreadable or malformed input, 3 for a
    /// precondition the data does not meet.
    pub fn exit_code(&self) -> i32 {
        use avclub_core::Error as G;
        match self {
            Error::Io { .. } | Error::Parse { .. } | Error::Format(_) | Error::Config(_) | Error::Csv(_) => 2,
            Error::Game(G::Parse(_) | G::RowArity { .. } | G::DuplicateAction { .. } | G::InvalidPayoff { .. }) => 2,
            Error::Game(G::InvalidConfig(_)) => 2,
            Error::Precondition(_) | Error::Game(_) => 3,
        }
    }
}
