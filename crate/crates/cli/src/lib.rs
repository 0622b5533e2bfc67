//! Command-line front end: configuration, table caches, artifacts and
//! calibration around `zeta_chords_core`.

// Range checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod calibrate;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod records;

pub use cli::run;
pub use error::{CliError, CliResult};
