use crate::config::ConfigError;
use crate::manifest::ManifestError;
use crate::wav::WavError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Manifest { path: String, source: ManifestError },
    #[error("{path}: {source}")]
    Wav { path: String, source: WavError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Extraction { path: String, source: trapframe_core::Error },
    #[error("{path}: {message}")]
    Cache { path: String, message: String },
    #[error(transparent)]
    Core(#[from] trapframe_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{failed} of {total} evaluation cells failed")]
    FailedCells { failed: usize, total: usize },
}

impl AppError {
    /// Short machine-readable category for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            AppError::Config(_) => "config",
            AppError::Manifest { .. } => "manifest",
            AppError::Wav { .. } => "audio",
            AppError::Io { .. } => "io",
            AppError::Extraction { .. } => "extraction",
            AppError::Cache { .. } => "cache",
            AppError::Core(_) => "analysis",
            AppError::Json(_) => "json",
            AppError::Usage(_) => "usage",
            AppError::FailedCells { .. } => "failed_cells",
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
