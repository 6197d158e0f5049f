use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid hypergraph: {0}")]
    Validation(String),

    #[error("node id {id} out of range (graph has {len} nodes)")]
    NodeOutOfRange { id: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("DTW requires non-empty sequences")]
    EmptySequence,

    #[error("split contains a single class; AUC and logistic fit are undefined")]
    SingleClass,

    #[error("embedding is missing {} node label(s): {}", .0.len(), .0.join(", "))]
    MissingLabels(Vec<String>),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// True for errors caused by the inputs rather than by the program itself.
    pub fn is_data_error(&self) -> bool {
        match self {
            Error::Internal(_) => false,
            Error::Stage { source, .. } => source.is_data_error(),
            _ => true,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
