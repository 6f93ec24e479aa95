//! The experiment dispatcher and the nine experiment kinds.

mod band;
mod chain;
mod dft;
mod hf;
mod hubbard;
mod spins;

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{CsvTable, RunSummary};
use hamlab_core::PauliAxis;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Engine(String),
}

impl ExperimentError {
    /// Exit code per the contract: 2 for configuration problems, 1 for
    /// runs that could not complete.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Engine(_) => 1,
        }
    }
}

macro_rules! engine {
    ($e:expr) => {
        $e.map_err(|err| ExperimentError::Engine(err.to_string()))
    };
}
pub(crate) use engine;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            workers: 1,
            out: None,
        }
    }
}

pub const EXPERIMENTS: [&str; 9] = [
    "gadget-verify",
    "chain-verify",
    "hubbard-exchange",
    "kp-band",
    "coulomb-cu",
    "dft-solve",
    "hf-ising",
    "erasure-scan",
    "sw-scan",
];

/// Dispatch one experiment. The returned summary carries every embedded
/// assertion; callers translate `pass` into the exit code.
pub fn run(
    kind: &str,
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    if let Some(named) = config.experiment() {
        if named != kind {
            return Err(ConfigError::ExperimentMismatch {
                config: named.to_string(),
                requested: kind.to_string(),
            }
            .into());
        }
    }
    match kind {
        "gadget-verify" => spins::gadget_verify(config, opts),
        "sw-scan" => spins::sw_scan(config, opts),
        "erasure-scan" => spins::erasure_scan(config, opts),
        "chain-verify" => chain::chain_verify(config, opts),
        "hubbard-exchange" => hubbard::exchange(config, opts),
        "kp-band" => band::kp_band(config, opts),
        "coulomb-cu" => band::coulomb(config, opts),
        "dft-solve" => dft::dft_solve(config, opts),
        "hf-ising" => hf::hf_ising(config, opts),
        other => Err(ConfigError::UnknownExperiment(other.to_string()).into()),
    }
}

/// Map sweep indices across a worker pool; results come back in order.
pub(crate) fn sweep_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.min(n))
        .build()
        .expect("worker pool");
    pool.install(|| {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    })
}

/// Two-letter axis pair such as `YZ`.
pub(crate) fn parse_axes(
    tag: &str,
    section: &str,
    key: &str,
) -> Result<(PauliAxis, PauliAxis), ConfigError> {
    let bad = || ConfigError::BadValue {
        section: section.into(),
        key: key.into(),
        value: tag.into(),
        wanted: "axis pair such as YZ",
    };
    let mut chars = tag.chars();
    let a = chars
        .next()
        .and_then(PauliAxis::from_label)
        .ok_or_else(bad)?;
    let b = chars
        .next()
        .and_then(PauliAxis::from_label)
        .ok_or_else(bad)?;
    if chars.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}
