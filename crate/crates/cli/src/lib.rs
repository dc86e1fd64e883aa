//! Command-line front end: configuration files, runs and renderings.

pub mod config;
pub mod render;
pub mod run;

pub use config::{parse_config, serialize_config, ConfigError, Format, Mode, RunConfig};
pub use render::render;
pub use run::{run, RunError, Summary};

/// Process exit status for a failed run.
pub fn exit_code(error: &RunError) -> i32 {
    use qwfc_core::Error;
    match error {
        RunError::Core(e) => match e.root() {
            Error::Conflict { .. } | Error::ExhaustedRestarts { .. } => 3,
            Error::Capacity(_) | Error::BudgetExceeded(_) => 4,
            Error::Invalid(_) => 2,
            _ => 1,
        },
        RunError::Io { .. } => 1,
    }
}
