//! Command-line front end for `curvlab-core`: configuration, file formats,
//! JSON reports and the five commands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod formats;
pub mod report;

pub use cli::run;
