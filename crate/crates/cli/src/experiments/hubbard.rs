//! Effective exchange of the half-filled Hubbard dimer across a `U` sweep.

use super::{engine, sweep_map, ExperimentError, RunOptions};
use crate::config::ExperimentConfig;
use crate::report::{Assertion, CsvTable, RunSummary};
use crate::{loglog_fit, FIT_FLOOR};
use hamlab_core::gadgets::hubbard_effective_exchange;
use serde_json::json;

pub(super) fn exchange(
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    let section = "hubbard-exchange";
    let t = config.f64_or(section, "t", 1.0)?;
    let u_values = config.sweep(section, "u_values", &[1e2, 1e3, 1e4])?;
    let slope_tol = config.f64_or(section, "slope_tol", 0.02)?;

    let reports: Vec<_> = sweep_map(u_values.len(), opts.workers, |i| {
        engine!(hubbard_effective_exchange(t, u_values[i]))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut table = CsvTable::new(
        "hubbard_exchange",
        &[
            "u (energy)",
            "exact_gap (energy)",
            "analytic_gap (energy)",
            "predicted_gap (energy)",
            "relative_error (dimensionless)",
        ],
    );
    let mut assertions = Vec::new();
    for r in &reports {
        table.push(vec![
            r.u,
            r.exact_gap,
            r.analytic_gap,
            r.predicted_gap,
            r.relative_error,
        ]);
        assertions.push(Assertion::near(
            &format!("gap_vs_analytic_at_u_{:.0}", r.u),
            r.exact_gap,
            r.analytic_gap,
            1e-10,
        ));
    }

    if reports.len() >= 3 {
        let points: Vec<(f64, f64)> = reports.iter().map(|r| (r.u, r.exact_gap)).collect();
        let fit = engine!(loglog_fit(&points, FIT_FLOOR))?;
        assertions.push(Assertion::near(
            "gap_slope_vs_u",
            fit.slope,
            -1.0,
            slope_tol,
        ));
        let summary = RunSummary::new(
            "hubbard-exchange",
            opts.seed,
            config.section_map(section),
            json!({"fit": fit, "reports": reports}),
            assertions,
        );
        return Ok((summary, vec![table]));
    }

    let summary = RunSummary::new(
        "hubbard-exchange",
        opts.seed,
        config.section_map(section),
        json!({"reports": reports}),
        assertions,
    );
    Ok((summary, vec![table]))
}
