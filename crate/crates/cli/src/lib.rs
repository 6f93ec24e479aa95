//! Experiment harness tying the toolkit together: flat-file configuration,
//! parameter sweeps with worker control, log-log scaling fits, and
//! deterministic report emission.
//!
//! Every experiment's output is a pure function of its configuration and
//! seed. Exit-code contract: 0 when every embedded assertion passes, 1 on
//! an assertion failure (the failing criterion is named), 2 on a
//! configuration error.

pub mod config;
pub mod experiments;
pub mod fit;
pub mod report;

pub use config::{ConfigError, ExperimentConfig};
pub use fit::{loglog_fit, FitError, FitResult};
pub use report::{Assertion, CsvTable, RunSummary};

/// Numerical floor for scaling fits: points at or below it are excluded so
/// floor-saturated values cannot corrupt slope estimates.
pub const FIT_FLOOR: f64 = 1e-13;
