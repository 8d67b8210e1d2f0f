use serde::Serialize;
use thiserror::Error;

/// Failures surfaced to the user, each with a stable code and exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("backend `{0}` not found in registry")]
    BackendNotFound(String),

    #[error("{path}: line {line}: {message}")]
    MalformedCsv { path: String, line: u64, message: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::BackendNotFound(_) => "BACKEND_NOT_FOUND",
            CliError::MalformedCsv { .. } => "MALFORMED_CSV",
            CliError::InvalidInput(_) => "INVALID_INPUT",
            CliError::Io { .. } => "IO_ERROR",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidInput(_) => 2,
            CliError::BackendNotFound(_) => 3,
            CliError::MalformedCsv { .. } => 4,
            CliError::Io { .. } => 5,
        }
    }

    /// `{"error":{"code":…,"message":…}}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorEnvelope {
            error: ErrorBody {
                code: self.code(),
                message: self.to_string(),
            },
        })
        .expect("error envelope serializes")
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            message: e.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CliError::InvalidInput(msg.into())
    }
}

impl From<qkrt_core::Error> for CliError {
    fn from(e: qkrt_core::Error) -> Self {
        match e {
            qkrt_core::Error::UnknownBackend(name) => CliError::BackendNotFound(name),
            other => CliError::InvalidInput(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
