//! Verification harness for the weighted variable-exponent Bergman toolkit in `varlp-core`.
//!
//! Suites bind the core modules into reproducible checks whose results are
//! emitted as JSON and CSV reports.

pub mod adhoc;
pub mod calibrate;
pub mod checks;
pub mod config;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod suites;

pub use error::{HarnessError, Result};
