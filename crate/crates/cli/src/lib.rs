//! Experiment orchestration for `mvbandit`: config ingestion, seeded
//! execution, figure data and atomic persistence.
//!
//! Every subcommand of the `mvbandit` binary is a thin wrapper over a
//! function in [`commands`], so tests can drive the same code paths.

pub mod commands;
pub mod config;
pub mod grid;
pub mod output;

pub use config::{EnvironmentEntry, SimulationConfig};
pub use grid::checkpoint_grid;
