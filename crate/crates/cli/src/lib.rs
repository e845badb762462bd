//! The `tmslab` command line: spec loading, the reproduction corpus and
//! report emission. `run` is the whole program minus process exit.

use std::fmt;

use tmslab_core::TmsError;

pub mod commands;
pub mod corpus;
pub mod input;
pub mod report;
pub mod schema;

pub use commands::run;
pub use report::{EntryResult, Expectation, Format, Report, RunConfig};

/// Exit status when every expectation was met.
pub const EXIT_MET: i32 = 0;
/// Exit status when the analysis ran but some expectation was violated.
pub const EXIT_VIOLATED: i32 = 1;
/// Exit status for bad arguments, malformed specs and I/O failures.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    /// A spec failed to parse or validate; one diagnostic per problem.
    Spec {
        what: String,
        diagnostics: Vec<String>,
    },
    Io(String),
    Core(TmsError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Spec { what, diagnostics } => {
                write!(f, "invalid {what}")?;
                for d in diagnostics {
                    write!(f, "\n  {d}")?;
                }
                Ok(())
            }
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<TmsError> for CliError {
    fn from(e: TmsError) -> Self {
        CliError::Core(e)
    }
}
