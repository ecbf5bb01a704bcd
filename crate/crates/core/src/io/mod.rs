//! Scenario files, presets, run orchestration and output writers.

pub mod config;
pub mod output;
pub mod presets;
pub mod scenario;

pub use config::{parse_config, serialize_config, ScenarioConfig};
pub use output::{write_csv, write_vtk, Series};
pub use presets::{preset, PRESETS};
pub use scenario::{run_scenario, RunOptions, RunReport, Simulation};
