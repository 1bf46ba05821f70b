//! File formats, a disk-backed basis cache, the verification suites and
//! the command-line front end for `prolong-core`.

pub mod cache;
pub mod checks;
pub mod cli;
pub mod error;
pub mod format;
pub mod report;
pub mod suite;

pub use cli::{run, run_with};
pub use error::CliError;
