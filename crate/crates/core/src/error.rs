use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("no upward crossing of {threshold} in sweep")]
    NoCrossing { threshold: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard(_) => 3,
            Error::InvalidParameter(_)
            | Error::Unsupported(_)
            | Error::Parse { .. }
            | Error::NoCrossing { .. } => 2,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
        }
    }
}
