//! Benchmark harness for `randproj-core`: triplet-file IO, timed trials that
//! compare the randomized projector against the normal equations, and
//! CSV/markdown reports.

pub mod config;
pub mod io;
pub mod report;
pub mod trial;

mod error;

pub use config::{MatrixKind, RngKind, TrialConfig};
pub use error::{BenchError, Result};
pub use report::{emit_report, parse_csv, ReportFormat, TableKind, TrialRow};
pub use trial::{run_sweep, run_trial, run_trial_on};
