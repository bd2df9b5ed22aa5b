use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{label}: {source}")]
    Config {
        label: String,
        #[source]
        source: simbias_core::Error,
    },
    #[error(transparent)]
    Core(#[from] simbias_core::Error),
    #[error("invalid run spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl RunError {
    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config { .. } => "config",
            RunError::Core(_) => "compute",
            RunError::Spec(_) => "spec",
            RunError::Io { .. } => "io",
            RunError::Json { .. } => "json",
            RunError::Csv { .. } => "csv",
            RunError::Pool(_) => "threads",
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            RunError::Config { label, .. } => Some(label),
            _ => None,
        }
    }

    /// The `{"error": {...}}` object written on failure.
    pub fn to_object(&self) -> ErrorObject<'_> {
        ErrorObject {
            error: ErrorBody { kind: self.kind(), message: self.to_string(), label: self.label() },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorObject<'a> {
    pub error: ErrorBody<'a>,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody<'a> {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'a str>,
}

pub type Result<T> = std::result::Result<T, RunError>;
