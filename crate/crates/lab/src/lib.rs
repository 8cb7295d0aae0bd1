//! Experiment runner for `wegner-core`: TOML configs, presets, parallel
//! sample execution and record files.

pub mod coeffs;
pub mod config;
pub mod error;
pub mod executor;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::ExperimentConfig;
pub use error::ConfigError;
pub use executor::Parallel;
pub use runner::{execute, run, Execution, Report};
