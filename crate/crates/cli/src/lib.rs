//! Library behind the `su3sp` binary: run configuration, verification suites,
//! chain computations and the versioned JSON report.

pub mod args;
pub mod compute;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

pub use config::{Command, Mode, RunConfig};
pub use error::{CliError, Result};
pub use report::{emit, run, Report, Status, SCHEMA};
pub use suites::{run_suite, Suite, SuiteReport};
