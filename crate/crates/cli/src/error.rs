use thiserror::Error;

/// Everything that maps to exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: fmetric::Error },
    #[error(transparent)]
    Core(#[from] fmetric::Error),
    #[error("cannot write report: {0}")]
    Write(#[from] std::io::Error),
}
