use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {field}: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Core(#[from] halfspace_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("plot: {0}")]
    Plot(String),
}

pub type CliResult<T> = Result<T, CliError>;
