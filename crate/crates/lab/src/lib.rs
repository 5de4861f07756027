//! Batch runner for the diagnostics of `markov-groupoids`.

pub mod catalog;
pub mod config;
pub mod error;
pub mod run;
pub mod summary;

pub use catalog::{builtin, builtins, list_experiments, Builtin, Outcome};
pub use config::{BatchConfig, ExperimentConfig, Settings};
pub use error::{LabError, Result};
pub use run::{check_expectations, run_experiment, ExperimentRecord, RunReport, Timing};
pub use summary::emit_summary;
