//! Command-line front end: configuration, presets, CSV output and the
//! subcommands built on `lighthouse-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
