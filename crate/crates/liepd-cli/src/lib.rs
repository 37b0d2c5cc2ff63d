//! Term grammar, structured-text file formats, and command plumbing for
//! the `liepd` binary. Kept as a library so the parsing and printing
//! layers are testable without spawning processes.

pub mod files;
pub mod term;

use std::fmt;

/// Command-level failure, ranked by exit code: syntax errors exit 1,
/// sort errors exit 2, everything semantic (validation, budgets,
/// mismatched contexts, I/O) exits 3.
#[derive(Debug)]
pub enum CliError {
    Parse { line: usize, col: usize, msg: String },
    Sort { subterm: String, msg: String },
    Semantic(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 1,
            CliError::Sort { .. } => 2,
            CliError::Semantic(_) => 3,
        }
    }

    pub fn semantic(msg: impl Into<String>) -> Self {
        CliError::Semantic(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            CliError::Sort { subterm, msg } => write!(f, "sort error in `{subterm}`: {msg}"),
            CliError::Semantic(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<liepd_core::Error> for CliError {
    fn from(e: liepd_core::Error) -> Self {
        CliError::Semantic(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Semantic(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
