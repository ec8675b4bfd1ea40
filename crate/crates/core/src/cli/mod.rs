//! Command-line front end: definition files, grid runs and report encoding.

pub mod config;
pub mod output;
pub mod runner;
