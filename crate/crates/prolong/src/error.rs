use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source_name}: malformed JSON at line {line}, column {column}: {message}")]
    Input { source_name: String, line: usize, column: usize, message: String },
    #[error("{0}: {1}")]
    InvalidInput(String, String),
    #[error("cannot read {}: {err}", path.display())]
    Read { path: PathBuf, err: std::io::Error },
    #[error("cannot write {}: {err}", path.display())]
    Write { path: PathBuf, err: std::io::Error },
    #[error(transparent)]
    Core(#[from] prolong_core::Error),
}

impl CliError {
    /// Process exit code: every error is a usage or input error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
