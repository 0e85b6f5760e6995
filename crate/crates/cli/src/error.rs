use std::path::PathBuf;
use std::process::ExitCode;

use dirsparse::bounds::BoundError;
use dirsparse::experiments::ExperimentError;
use dirsparse::samplers::SamplerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for a failed verification, 2 for everything that prevented one.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}
