use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: row {row}, column `{column}`: {message}")]
    Parse { path: PathBuf, row: usize, column: String, message: String },
    #[error("column `{column}` has {missing} missing cells out of {total} (limit 5%)")]
    TooManyMissing { column: String, missing: usize, total: usize },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] hawkcast::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 2 for usage, input and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::TooManyMissing { .. }
            | CliError::Config { .. } => 2,
            CliError::Core(e) if matches!(e, hawkcast::Error::InvalidConfig(_) | hawkcast::Error::TooShort { .. }) => 2,
            CliError::Core(_) | CliError::Internal(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
