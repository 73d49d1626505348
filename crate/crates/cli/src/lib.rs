//! Batch front end: read a config, build the twist chain, run the requested
//! checks and emit reports and tables.

pub mod chain;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{run, tables, RunReport, TablesReport};

/// Read and parse a config file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    RunConfig::from_json(&text).map_err(|e| CliError::Config(e.to_string()))
}
