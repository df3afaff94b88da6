//! Experiment runner for the `semilab` library: TOML configs in, CSV
//! tables and JSON reports out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod report;

pub use commands::{hardy, simulate, theorem_check, witness, RunOptions};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use output::{write_atomic, Outcome, Table};
pub use report::{Check, RunReport, Verdict};
