//! Std companion to `latin-parity-core`: square file format, JSON and CSV
//! reports, rayon runners, the chi-square uniformity test and the CLI.

pub mod commands;
pub mod format;
pub mod parallel;
pub mod uniformity;

pub use commands::{run, Cli, Output};
