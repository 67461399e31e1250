//! Command implementations behind the `aoi` binary.
//!
//! Every command writes to a caller-supplied sink so the same code paths
//! serve the binary and the tests.

pub mod args;
pub mod commands;
pub mod format;
pub mod grid;
pub mod plot;
pub mod sweep;
pub mod validate;

pub use args::{Cli, Command};
pub use commands::{execute, Outcome};
