//! Full-chain compilation and Krylov verification.

use super::{engine, parse_axes, ExperimentError, RunOptions};
use crate::config::ExperimentConfig;
use crate::report::{Assertion, CsvTable, RunSummary};
use hamlab_core::gadgets::{compile_full_chain, verify_chain, CompiledChain, StrengthSchedule};
use serde_json::json;

pub(super) fn chain_verify(
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    let section = "chain-verify";

    // Either compile from parameters or accept a previously emitted chain.
    let chain: CompiledChain = match config.str_or(section, "chain_json", "") {
        "" => {
            let axes = parse_axes(config.str_or(section, "axes", "YZ"), section, "axes")?;
            let lambda_target = config.f64_or(section, "lambda_target", 0.02)?;
            let schedule = match config.str_or(section, "schedule", "geometric") {
                "geometric" => {
                    let r = config.f64_or(section, "ratio", 20.0)?;
                    let base = config.f64_or(section, "base", 1.0)?;
                    engine!(StrengthSchedule::geometric(r, base))?
                }
                "paper" => {
                    let n = config.usize_or(section, "n", 2)? as u64;
                    let q = config.f64_or(section, "q", 1.0)?;
                    StrengthSchedule::paper(n, q)
                }
                other => {
                    return Err(ExperimentError::Engine(format!(
                        "unknown schedule mode `{other}`"
                    )))
                }
            };
            engine!(compile_full_chain(axes.0, axes.1, lambda_target, &schedule))?
        }
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ExperimentError::Engine(format!("cannot read chain: {e}")))?;
            engine!(CompiledChain::from_json(&text))?
        }
    };

    let strength_tol = config.f64_or(section, "strength_tol", 0.25)?;
    let verification = engine!(verify_chain(&chain, opts.seed))?;

    let mut table = CsvTable::new(
        "chain_spectrum",
        &["index (dimensionless)", "eigenvalue (energy)"],
    );
    for (i, e) in verification.eigenvalues.iter().enumerate() {
        table.push(vec![i as f64, *e]);
    }

    let assertions = vec![
        Assertion::near("chain_qubits", chain.n_qubits() as f64, 17.0, 0.0),
        Assertion::near(
            "chain_couplings",
            chain.lattice().edges().len() as f64,
            16.0,
            0.0,
        ),
        Assertion::magnitude(
            "degeneracy_residual",
            verification.degeneracy_residual,
            0.05,
        ),
        Assertion::magnitude(
            "coupling_sign",
            (verification.measured_strength.signum() - verification.predicted_strength.signum())
                .abs(),
            0.0,
        ),
        Assertion::magnitude(
            "strength_relative_error",
            verification.relative_error,
            strength_tol,
        ),
    ];
    let summary = RunSummary::new(
        "chain-verify",
        opts.seed,
        config.section_map(section),
        json!({
            "chain": chain,
            "verification": verification,
        }),
        assertions,
    );
    Ok((summary, vec![table]))
}
