use std::fmt;

/// Failures of the command-line layer, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments: exit status 2.
    Usage(String),
    /// Unreadable or invalid data, or a failed computation: exit status 1.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Errors that name something the caller typed are usage errors; the rest
/// concern the data.
impl From<casecontrol_core::Error> for CliError {
    fn from(e: casecontrol_core::Error) -> Self {
        use casecontrol_core::Error as E;
        match e {
            E::UnknownVariable(_)
            | E::DuplicateVariable(_)
            | E::EmptyVariableName
            | E::PartialAddress
            | E::InvalidLevel { .. }
            | E::Formula { .. }
            | E::InvalidArgument(_)
            | E::MalformedSequence(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(format!("invalid JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
