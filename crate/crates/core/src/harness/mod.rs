//! Batch experiments, result tables, the oracle suite and the CLI.

pub mod cli;
pub mod config;
pub mod presets;
pub mod table;
pub mod validate;

pub use cli::cli_run;
pub use config::Settings;
pub use presets::{
    preset_hill_climb, preset_plateau_escape, preset_selection_comparison, Experiment,
    ExperimentOutput, ExperimentPreset,
};
pub use table::{Metric, ResultTable, TableRow};
pub use validate::{run_validation, ValidationReport, ValidationRow};
