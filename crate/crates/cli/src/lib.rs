//! Scenario runner for the lateral alignment estimator: single scenarios,
//! robustness sweeps, suspension identification, modal summaries and track
//! generation, all driven by JSON configuration files.

pub mod commands;
pub mod config;
pub mod error;
pub mod ident_run;
pub mod scenario;
pub mod sweep;

pub use config::{merge, NoiseConfig, ScenarioConfig, Seeds, SweepConfig};
pub use error::{CliError, Result};
pub use ident_run::{execute_ident, run_ident, IdentOutcome};
pub use scenario::{execute_scenario, run_scenario, ScenarioRun};
pub use sweep::{run_sweep, SweepReport};
