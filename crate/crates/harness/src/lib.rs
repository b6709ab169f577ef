//! Files, experiments and the `naivepll` command line.
//!
//! [`plld`] reads and writes the PLLD dataset format, [`model_file`] stores parameter
//! snapshots, [`table`] writes CSV results, [`plot`] renders them as SVG, and
//! [`experiments`] holds the repeated-training protocols. [`cli`] ties them together.

pub mod bounds;
pub mod cli;
mod config;
pub mod error;
pub mod experiments;
pub mod model_file;
pub mod plld;
pub mod plot;
pub mod table;

pub use error::{Error, Result};
