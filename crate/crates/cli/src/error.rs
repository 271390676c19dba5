use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        message: String,
        line: usize,
        column: usize,
    },

    #[error("{0}")]
    Schema(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] suture_core::Error),
}
