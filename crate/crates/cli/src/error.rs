use std::path::PathBuf;

/// Errors surfaced to the command line, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Estimation(#[from] fastmi::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const CONFIG: i32 = 4;
    pub const NUMERICAL: i32 = 5;
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use fastmi::Error as E;
        match self {
            Self::Io { .. } => exit::IO,
            Self::Parse(_) => exit::PARSE,
            Self::Config(_) => exit::CONFIG,
            Self::Estimation(e) => match e {
                E::InsufficientData { .. } | E::InvalidInput(_) => exit::PARSE,
                E::Config(_) | E::DomainError { .. } => exit::CONFIG,
                _ => exit::NUMERICAL,
            },
        }
    }
}
