//! Scenario files, presets, runs and output writers.

mod config;
pub mod output;
pub mod presets;
mod run;

pub use config::{
    parse_config, parse_config_with_overrides, parse_number, OutputKind, Scenario, SolverSettings,
    TrajectoryRequest,
};
pub use output::{write_bundle, Format};
pub use run::{double_slit_system, run_scenario, NamedField, OutputBundle};
