//! Command-line front end: run configs, the verification suite and report
//! files.

pub mod cli;
pub mod config;
pub mod output;
pub mod suite;
