use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    NoStates(String),
    #[error(transparent)]
    Core(#[from] su3_core::Error),
    #[error(transparent)]
    Chain(#[from] su3_chain::ChainError),
    #[error(transparent)]
    Lattice(#[from] su3_lattice::LatticeError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::NoStates(_) => "no-states",
            CliError::Core(_) => "core",
            CliError::Chain(_) => "chain",
            CliError::Lattice(_) => "lattice",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        }
    }

    pub fn to_object(&self) -> ErrorObject {
        ErrorObject { kind: self.kind(), message: self.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorObject {
    pub kind: &'static str,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, CliError>;
