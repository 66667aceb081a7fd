//! Command-line driver for the kxxz workspace.
//!
//! Three commands: `solve-bethe` solves one sector and stores the solutions,
//! `verify` runs named verification suites and writes a report, and `report`
//! renders stored reports and solution sets. Suites are trait objects in a
//! [`SuiteRegistry`], looked up by the name given on the command line.

pub mod commands;
pub mod config;
pub mod output;
pub mod suites;

pub use commands::{run, CACHE_DIR_ENV, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_INCOMPLETE, EXIT_OK};
pub use config::{generic_a, RunConfig};
pub use output::{decode_report, encode_report, ReportDocument, REPORT_SCHEMA};
pub use suites::{Sabotage, Suite, SuiteContext, SuiteError, SuiteRegistry, Tolerances};
