//! Command-line companion of `ehrsev-core`: CSV loading, experiment
//! configuration, the run pipeline, report tables and their comparison
//! against reference values, and the saved-model format.

pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod model_io;
pub mod report;
pub mod reproduce;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiment::{run_experiment, Manifest, RunOutcome};
pub use report::{compare_to_reference, ReportTable, Tolerances};
