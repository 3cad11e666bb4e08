use corrlab_core::ErrorClass;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{op}: {source}")]
    Core {
        op: String,
        #[source]
        source: corrlab_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 2 for configuration and input errors, 3 for numeric failures, 4 for caps.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core { source, .. } => match source.class() {
                ErrorClass::Input => 2,
                ErrorClass::Numeric => 3,
                ErrorClass::Cap => 4,
            },
        }
    }
}

/// Attaches the name of the failing operation to a core error.
pub trait Context<T> {
    fn during(self, op: &str) -> Result<T, CliError>;
}

impl<T> Context<T> for corrlab_core::Result<T> {
    fn during(self, op: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { op: op.to_string(), source })
    }
}
