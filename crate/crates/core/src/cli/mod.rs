//! Experiment runner: configuration, cached runs, reports and the
//! built-in verification battery.
//!
//! Exit codes: 0 success; 2 invalid configuration or input (including a
//! missing or corrupt record); 3 budget exceeded; 4 certification failure
//! or a failed check; 1 anything else.

pub mod config;
pub mod record;
pub mod report;
pub mod run;
pub mod suites;
pub mod verify;

pub use config::{ExperimentConfig, ExperimentKind, GSpec, Shape, TOOL_VERSION};
pub use record::{cache_root, Cache, Check, ResultRecord, CACHE_ENV};
pub use run::{run, RunOutcome};

use crate::error::Error;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Certification(_) | Error::RootFinding(_) | Error::NonIntegral(_) | Error::DegreeMismatch { .. } => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}
