//! File formats, synthetic data and the command-line front end for
//! `mammotex-core`.

pub mod cli;
pub mod error;
pub mod features;
pub mod mias;
pub mod pgm;
pub mod report;
pub mod synth;

pub use error::{CliError, Result};
