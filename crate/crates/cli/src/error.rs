use serde_json::json;
use thiserror::Error;

use isoprim_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Core(e) => e.kind(),
            CliError::Write { .. } => "Io",
        }
    }

    /// 2 for malformed or inconsistent input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Write { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::OrderViolation(_)
                | CoreError::Parse { .. }
                | CoreError::DuplicateId { .. }
                | CoreError::NonFinite(_)
                | CoreError::DimensionMismatch { .. }
                | CoreError::IdMismatch(_)
                | CoreError::Invalid(_) => 2,
                _ => 1,
            },
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() })
            .to_string()
    }
}
