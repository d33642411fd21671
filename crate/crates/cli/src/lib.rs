//! Experiment pipelines, configuration and reports for the `uurlab` tool.

pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::{ingest_config, parse_config, ExperimentKind, ExperimentSpec, Params};
pub use error::{CliError, ConfigError, Result};
pub use experiments::run_experiment;
pub use report::{Check, ReportBundle, Summary, Table};
