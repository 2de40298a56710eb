use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("window grammar: {0}")]
    Grammar(String),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },
    #[error("report serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] gabor_rp_core::Error),
}

impl CliError {
    /// 0 success, 1 usage or parse, 2 assumption or hypothesis violation,
    /// 3 numerical infeasibility.
    pub fn exit_code(&self) -> i32 {
        use gabor_rp_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::InvalidSpec(_) | E::InvalidArgument(_) | E::Shape(_) => 1,
                E::AssumptionViolation { .. } | E::HypothesisViolation(_) | E::Uncertifiable(_) => 2,
                E::Accuracy { .. } | E::ResolutionInfeasible { .. } | E::ReconstructionRefused(_) => 3,
            },
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
