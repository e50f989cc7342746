//! File formats, reports and the `heartml` command-line tool built on
//! [`heartml_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod io;
pub mod report;

pub use error::{AppError, ExitCode};

/// Tool version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
