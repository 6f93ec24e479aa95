//! Gadget verification, Schrieffer-Wolff scans, and erasure scans.

use super::{engine, parse_axes, sweep_map, ExperimentError, RunOptions};
use crate::config::ExperimentConfig;
use crate::report::{Assertion, CsvTable, RunSummary};
use crate::{loglog_fit, FIT_FLOOR};
use hamlab_core::gadgets::{
    compile_erasure, compile_ising_to_xx, compile_pauli_to_ising, compile_pauli_tune,
    compile_xx_to_heisenberg, verify_erasure, verify_gadget, GadgetSpec,
};
use hamlab_core::sw::BlockSplit;
use hamlab_core::{LatticeGraph, PauliAxis};
use serde_json::json;
use std::collections::BTreeSet;

fn compile_kind(
    kind: &str,
    axes: (PauliAxis, PauliAxis),
    lambda: f64,
    b_field: f64,
    lambda_target: f64,
) -> Result<GadgetSpec, ExperimentError> {
    let spec = match kind {
        "pauli-tune" => compile_pauli_tune(axes.0, axes.1, lambda_target, lambda, b_field),
        "pauli-to-ising" => compile_pauli_to_ising(axes.0, axes.1, lambda, b_field),
        "ising-to-xx" => compile_ising_to_xx(lambda, b_field),
        "xx-to-heisenberg" => compile_xx_to_heisenberg(lambda, b_field),
        other => {
            return Err(ExperimentError::Engine(format!(
                "unknown gadget kind `{other}`"
            )))
        }
    };
    engine!(spec)
}

/// Verify one gadget kind across a field sweep: predicted vs measured
/// effective coupling and the second-order deviation.
pub(super) fn gadget_verify(
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    let section = "gadget-verify";
    let kind = config.str_or(section, "kind", "pauli-tune").to_string();
    let axes = parse_axes(config.str_or(section, "axes", "YZ"), section, "axes")?;
    let lambda = config.f64_or(section, "lambda", 1.0)?;
    let b_values = config.sweep(section, "b_values", &[1e3])?;
    let target_fraction = config.f64_or(section, "target_fraction", 0.3)?;

    let rows: Vec<Result<Vec<f64>, ExperimentError>> =
        sweep_map(b_values.len(), opts.workers, |i| {
            let b = b_values[i];
            let lambda_target = target_fraction * lambda * lambda / b;
            let spec = compile_kind(&kind, axes, lambda, b, lambda_target)?;
            let v = engine!(verify_gadget(&spec))?;
            Ok(vec![
                b,
                v.predicted[0].strength,
                v.measured[0].strength,
                v.max_rel_error,
                v.report.measured_deviation,
                v.report.predicted_bound,
            ])
        });

    let mut table = CsvTable::new(
        "gadget_verify",
        &[
            "b_field (energy)",
            "predicted_coupling (energy)",
            "measured_coupling (energy)",
            "max_rel_error (dimensionless)",
            "deviation (energy)",
            "bound (energy)",
        ],
    );
    let mut assertions = Vec::new();
    for row in rows {
        let row = row?;
        let (b, rel) = (row[0], row[3]);
        // The paper's envelope: relative error <= 10 lambda / B.
        if lambda > 0.0 {
            assertions.push(Assertion::magnitude(
                &format!("rel_error_at_b_{b:.0}"),
                rel,
                10.0 * lambda / b,
            ));
        } else {
            assertions.push(Assertion::magnitude(
                &format!("zero_coupling_deviation_at_b_{b:.0}"),
                row[4],
                1e-12 + 4e-16 * b,
            ));
        }
        table.push(row);
    }

    let summary = RunSummary::new(
        "gadget-verify",
        opts.seed,
        config.section_map(section),
        json!({"kind": kind, "lambda": lambda}),
        assertions,
    );
    Ok((summary, vec![table]))
}

/// Deviation-vs-field scan with a log-log slope fit.
pub(super) fn sw_scan(
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    let section = "sw-scan";
    let kind = config.str_or(section, "kind", "pauli-tune").to_string();
    let axes = parse_axes(config.str_or(section, "axes", "YZ"), section, "axes")?;
    let lambda = config.f64_or(section, "lambda", 1.0)?;
    let b_values = config.sweep(section, "b_values", &[1e2, 1e3, 1e4])?;
    let target_fraction = config.f64_or(section, "target_fraction", 0.3)?;
    let slope_target = config.f64_or(section, "slope", -2.0)?;
    let slope_tol = config.f64_or(section, "slope_tol", 0.15)?;

    let points: Vec<(f64, f64)> = sweep_map(b_values.len(), opts.workers, |i| {
        let b = b_values[i];
        let lambda_target = target_fraction * lambda * lambda / b;
        let spec = compile_kind(&kind, axes, lambda, b, lambda_target)?;
        let h = engine!(spec.field_hamiltonian())?;
        let v = engine!(spec.coupling_hamiltonian())?;
        let h_op = engine!(h.to_matrix())?;
        let v_op = engine!(v.to_matrix())?;
        let split = engine!(BlockSplit::from_energy_cut(&h_op, &v_op, b / 2.0))?;
        let report = engine!(hamlab_core::sw::effective_hamiltonian_2nd(
            &h_op, &v_op, &split
        ))?;
        Ok::<(f64, f64), ExperimentError>((b, report.measured_deviation))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let fit = engine!(loglog_fit(&points, FIT_FLOOR))?;
    let mut table = CsvTable::new("sw_scan", &["b_field (energy)", "deviation (energy)"]);
    for &(b, d) in &points {
        table.push(vec![b, d]);
    }

    let assertions = vec![Assertion::near(
        "deviation_slope",
        fit.slope,
        slope_target,
        slope_tol,
    )];
    let summary = RunSummary::new(
        "sw-scan",
        opts.seed,
        config.section_map(section),
        json!({"fit": fit, "kind": kind}),
        assertions,
    );
    Ok((summary, vec![table]))
}

/// Deviation of the erased lattice's low spectrum against the induced
/// subgraph across a field sweep; first-order gadget, slope -1.
pub(super) fn erasure_scan(
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    let section = "erasure-scan";
    let sites = config.usize_or(section, "sites", 3)?;
    let j = config.f64_or(section, "j", 1.0)?;
    let b_values = config.sweep(section, "b_values", &[1e2, 1e3, 1e4])?;
    let levels = config.usize_or(section, "levels", 4)?;
    let slope_tol = config.f64_or(section, "slope_tol", 0.1)?;
    // Default: erase every second site of a chain.
    let keep: BTreeSet<usize> = match config.str_or(section, "keep", "") {
        "" => (0..sites).step_by(2).collect(),
        text => text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| ExperimentError::Engine(format!("bad keep index `{t}`")))
            })
            .collect::<Result<_, _>>()?,
    };
    let lattice = LatticeGraph::chain(sites);

    let points: Vec<(f64, f64)> = sweep_map(b_values.len(), opts.workers, |i| {
        let b_e = b_values[i];
        let v = engine!(verify_erasure(&lattice, &keep, j, b_e, levels))?;
        Ok::<(f64, f64), ExperimentError>((b_e, v.deviation))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let fit = engine!(loglog_fit(&points, FIT_FLOOR))?;
    let mut table = CsvTable::new("erasure_scan", &["b_erase (energy)", "deviation (energy)"]);
    for &(b, d) in &points {
        table.push(vec![b, d]);
    }

    let gadget = engine!(compile_erasure(&lattice, &keep, j, b_values[0]))?;
    let assertions = vec![Assertion::near("erasure_slope", fit.slope, -1.0, slope_tol)];
    let summary = RunSummary::new(
        "erasure-scan",
        opts.seed,
        config.section_map(section),
        json!({
            "fit": fit,
            "kept_sites": gadget.kept,
            "predicted_offset": gadget.predicted_offset,
        }),
        assertions,
    );
    Ok((summary, vec![table]))
}
