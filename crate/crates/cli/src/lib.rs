//! Library half of the `speedclean` binary: file formats, command
//! implementations, and synthetic-data generators (also used by the test
//! suites).

pub mod commands;
pub mod csvio;
pub mod error;
pub mod report;
pub mod synth;

pub use error::CliError;
