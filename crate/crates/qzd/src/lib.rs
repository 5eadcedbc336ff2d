//! Experiment specs, runners, output files and the command-line front end
//! for quantum Zeno teleportation runs built on [`qzd_core`].

pub mod check;
pub mod cli;
mod error;
pub mod overrides;
pub mod persist;
pub mod presets;
pub mod runner;
pub mod spec;

pub use error::{Error, Result};
pub use runner::{run_experiment, ExperimentOutput, Selection};
pub use spec::ExperimentSpec;
