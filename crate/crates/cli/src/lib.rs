//! Experiment runner for `anisoflow`: TOML configuration, subcommand
//! pipelines and run manifests.

pub mod args;
pub mod config;
pub mod error;
pub mod manifest;
pub mod pipeline;

pub use args::{Cli, Command};
pub use config::{load_config, parse_config, ExperimentConfig};
pub use error::CliError;
pub use manifest::Manifest;
pub use pipeline::{execute, Setup};
