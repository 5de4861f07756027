use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("verdicts differ from expectations:\n{0}")]
    ExpectationFailed(String),
    #[error(transparent)]
    Core(#[from] markov_groupoids::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::ExpectationFailed(_) => 2,
            _ => 1,
        }
    }
}
