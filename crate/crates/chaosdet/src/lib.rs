//! Files, reports, parallel Monte Carlo and the command-line front end for
//! [`chaosdet_core`].

pub mod commands;
mod error;
pub mod format;
pub mod output;
pub mod parallel;

pub use error::{Error, Result};
