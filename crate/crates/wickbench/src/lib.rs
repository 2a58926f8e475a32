//! Verification harness for the Gaussian Wick calculus in `wick_core`.
//!
//! Each check evaluates both sides of an inequality (or a positivity
//! certificate) and records them as an [`InequalityReport`](wick_core::InequalityReport).
//! [`suite::run_suite`] expands a [`config::SuiteConfig`] into tasks, evaluates
//! them in parallel and writes `report.json` and `report.csv`.

// `!(x >= 0)` guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod checks;
pub mod config;
pub mod error;
pub mod random;
pub mod suite;

pub use args::CheckArgs;
pub use checks::{CheckKind, FunctionSpec, Tolerances};
pub use config::SuiteConfig;
pub use error::{BenchError, Result};
