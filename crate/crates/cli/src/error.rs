use thiserror::Error;

/// Failures of a scenario run, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<wherald_core::Error> for CliError {
    fn from(e: wherald_core::Error) -> Self {
        use wherald_core::Error as E;
        match e {
            E::Numerical(_) | E::NotAntiHermitian | E::NotNormalized(_) => CliError::Numerical(e.to_string()),
            other => CliError::Config { field: "scenario".into(), message: other.to_string() },
        }
    }
}
