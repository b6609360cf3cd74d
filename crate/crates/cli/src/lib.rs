//! Command-line front end for the `hawkcast` forecasting library.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixture;
pub mod ingest;
pub mod manifest;
pub mod svg;

pub use error::{CliError, CliResult};
