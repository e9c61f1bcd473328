use std::path::Path;

/// Top-level failure, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Config(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
}

impl AppError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        AppError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 1,
            AppError::Solver(_) => 2,
            AppError::Io(_) => 3,
        }
    }
}

impl From<quadspec_core::Error> for AppError {
    fn from(e: quadspec_core::Error) -> Self {
        match e {
            quadspec_core::Error::InvalidArgument(_)
            | quadspec_core::Error::WrongGridKind { .. }
            | quadspec_core::Error::DimensionMismatch { .. }
            | quadspec_core::Error::TooLarge { .. } => AppError::Config(e.to_string()),
            _ => AppError::Solver(e.to_string()),
        }
    }
}
