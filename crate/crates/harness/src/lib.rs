//! Experiment harness for ensemble variational eigensolver runs.
//!
//! Builds problems from files or built-in surrogates, sweeps scan
//! variables and trials with per-pair seeds, and writes convergence
//! traces, summaries, and paired statistics with exact dense baselines.

pub mod error;
pub mod family;
pub mod metrics;
pub mod report;
pub mod scenario;
pub mod stats;

pub use error::{HarnessError, Result};
