//! Command-line front end: config-driven solves, weight fitting, energy
//! evaluation, and comparison against external node data.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod model;

pub use commands::{run, Cli};
pub use config::Config;
pub use error::CliError;
pub use model::Model;
