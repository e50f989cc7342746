use heartml_core::Error as CoreError;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Usage = 1,
    Data = 2,
    Training = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: CoreError,
    },
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("unsupported model file version {0}")]
    ModelVersion(u32),
}

impl AppError {
    pub fn core(context: impl Into<String>, source: CoreError) -> Self {
        AppError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Usage(_) => ExitCode::Usage,
            AppError::Io { .. } | AppError::Json { .. } | AppError::Csv(_) => ExitCode::Data,
            AppError::ModelVersion(_) => ExitCode::Data,
            AppError::Core { source, .. } => match source {
                CoreError::SingleClassData
                | CoreError::TooFewRows { .. }
                | CoreError::NonConvergence { .. }
                | CoreError::AllCandidatesFailed(_) => ExitCode::Training,
                CoreError::InvalidHyperParams(_)
                | CoreError::EmptyGrid
                | CoreError::MixedGrid
                | CoreError::InvalidFoldCount { .. }
                | CoreError::UnknownFeature(_) => ExitCode::Usage,
                _ => ExitCode::Data,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, AppError>;
