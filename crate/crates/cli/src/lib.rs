//! Command-line front end for `fastmi`: estimates and tests on CSV files,
//! and the seeded simulation studies behind the benchmark tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod real_data;
pub mod report;
pub mod study;

pub use commands::{execute, run};
pub use config::Cli;
pub use error::{CliError, CliResult};
