//! Experiment runner and file formats for the `wsn-core` simulator.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::{load_config, load_config_with, ConfigError, ExperimentConfig, Overrides};
pub use experiment::{run_all, run_experiment, ComparisonReport, ExperimentOutput};
