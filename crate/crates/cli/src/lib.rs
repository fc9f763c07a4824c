//! Command-line front end for elliskit: instance files, reports, bundled fixtures and
//! seeded verification suites.

pub mod analyze;
pub mod catalog;
pub mod generate;
pub mod oracle;
pub mod report;
pub mod schema;
pub mod suites;

use elliskit_core::caps::CapsError;
use elliskit_core::Caps;

pub use catalog::{run_example, UnknownExample};
pub use report::{Mode, Report};
pub use schema::{parse_instance, LoadError};
pub use suites::{run_suite, Suite, SuiteConfig};

/// Environment variable with cap overrides, `key=value[,key=value...]`.
pub const CAPS_ENV: &str = "ELLISKIT_CAPS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    UnknownExample(#[from] UnknownExample),
    #[error("{CAPS_ENV}: {0}")]
    Caps(#[from] CapsError),
    #[error("{0}")]
    Usage(String),
    #[error("size limit: {0}")]
    Limit(String),
}

impl CliError {
    /// Every error here is an input problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Default caps with the overrides from [`CAPS_ENV`] applied.
pub fn caps_from_env() -> Result<Caps, CliError> {
    match std::env::var(CAPS_ENV) {
        Ok(spec) => Ok(Caps::default().with_overrides(&spec)?),
        Err(_) => Ok(Caps::default()),
    }
}
