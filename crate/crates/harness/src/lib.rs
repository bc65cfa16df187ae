//! Experiment configuration, execution and reporting for the entanglement
//! spectrum studies.

pub mod calibrate;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod plot;
pub mod records;
pub mod runner;
pub mod seed;
pub mod simulate;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::{HarnessError, Result};
pub use experiments::{experiment, experiments, Experiment, Report};
pub use records::{RunRecord, SummaryRow};
pub use runner::{run_experiment, ExperimentOutput, RunOptions};
