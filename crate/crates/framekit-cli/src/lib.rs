//! Library surface of the command-line front end: file formats and the
//! command implementations, kept separate from argument parsing so the
//! integration tests can drive them directly.

pub mod commands;
pub mod io;

/// Error carrying the process exit code: 2 for usage and parse
/// problems, 3 for mathematical precondition failures.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit_code: 2,
        }
    }

    /// A math error raised while interpreting flags or files is a usage
    /// problem, not a failed computation.
    pub fn usage_from_math(err: framekit::Error) -> Self {
        CliError {
            message: err.to_string(),
            exit_code: 2,
        }
    }

    pub fn math(err: framekit::Error) -> Self {
        CliError {
            message: err.to_string(),
            exit_code: 3,
        }
    }
}

impl From<framekit::Error> for CliError {
    fn from(err: framekit::Error) -> Self {
        CliError::math(err)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub const TOOL_TAG: &str = concat!("framekit-cli ", env!("CARGO_PKG_VERSION"));
