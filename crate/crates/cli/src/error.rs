use std::path::PathBuf;
use std::process::ExitCode;

/// Errors surfaced by the file formats and commands.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] mammotex_core::Error),
    #[error("invalid PGM: {0}")]
    Pgm(String),
    #[error("invalid MIAS index line {line}: {reason}")]
    MiasIndex { line: usize, reason: String },
    #[error("invalid feature CSV: {0}")]
    FeatureCsv(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{failed} of {total} ROIs failed; partial output written to {partial}")]
    Partial {
        failed: usize,
        total: usize,
        partial: PathBuf,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 for internal failures (including failing to write outputs), 2 for
    /// bad input and partial runs.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Write { .. } | CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
