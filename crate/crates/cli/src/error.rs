use catlab_core::Error as CoreError;
use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                CoreError::ResourceGuard { .. } | CoreError::RetentionCap { .. } => EXIT_GUARD,
                CoreError::Disconnected { .. } => EXIT_FAILURE,
                _ => EXIT_USAGE,
            },
            CliError::Io(_) | CliError::Json(_) => EXIT_FAILURE,
        }
    }
}
