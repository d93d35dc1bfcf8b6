use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] sigmalab_core::Error),
    #[error("profile {name} is too wide for the box: tail mass fraction {tail:e} exceeds 1e-10")]
    ProfileTooWide { name: &'static str, tail: f64 },
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        LabError::Config { path: path.into(), message: message.into() }
    }

    /// Usage and configuration problems, as opposed to numerical failures.
    pub fn is_usage(&self) -> bool {
        matches!(self, LabError::Config { .. } | LabError::Io { .. } | LabError::Json(_) | LabError::ProfileTooWide { .. })
            || matches!(self, LabError::Core(sigmalab_core::Error::InvalidParams(_)))
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
