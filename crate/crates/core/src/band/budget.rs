//! Error-budget arithmetic of the band-model reduction.
//!
//! The ground-state energy error from projecting onto the bound band obeys
//!
//! ```text
//! dE <= p (-Delta + alpha) + 2 sqrt((1-p) p) beta
//! ```
//!
//! maximized near `p ~ beta^2 / Delta^2` with value `O(beta^2 / Delta)`.
//! Every named bound term is evaluated with unit constants; the hierarchy
//! flags report whether the scales actually separate.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBudget {
    pub n: u64,
    pub tau: f64,
    pub zeta: f64,
    pub v_well: f64,
    /// `alpha = N^{2 - zeta}`: low-band interaction bound.
    pub alpha: f64,
    /// `beta^2 = N^{2 - 2 zeta}`: cross-block coupling bound.
    pub beta_sq: f64,
    pub beta: f64,
    /// `Delta = V^2`: gap to the continuum in the `-Delta` convention.
    pub delta: f64,
    /// Analytic maximizer scale `beta^2 / Delta^2`.
    pub p_opt: f64,
    /// Budget value `beta^2 / Delta`.
    pub delta_e: f64,
    /// The pure exponent part `N^{2 - 2 zeta}` for scale checks.
    pub delta_e_scale: f64,
    /// Coulomb cross terms `V^4 N^{4 - tau - zeta}`.
    pub cross_coulomb: f64,
    /// Off-site magnetic contribution `V N^{3 - 2 tau}`.
    pub magnetic_offsite: f64,
    /// `0 < zeta < tau - 3`.
    pub exponent_window_ok: bool,
    /// `Delta >= 10 max(alpha, beta)`.
    pub gap_hierarchy_ok: bool,
    pub hierarchy_ok: bool,
    /// Numerically maximized `p (-Delta + alpha) + 2 sqrt((1-p)p) beta`.
    pub p_star_numeric: f64,
    pub delta_e_numeric: f64,
}

/// Evaluate the budget for lattice size `n` and exponents `tau`, `zeta`.
pub fn error_budget(n: u64, tau: f64, zeta: f64) -> ErrorBudget {
    let nf = n as f64;
    let v_well = tau * nf.ln();
    let alpha = nf.powf(2.0 - zeta);
    let beta_sq = nf.powf(2.0 - 2.0 * zeta);
    let beta = beta_sq.sqrt();
    let delta = v_well * v_well;

    let objective = |p: f64| p * (-delta + alpha) + 2.0 * ((1.0 - p) * p).sqrt() * beta;
    // Log-spaced scan then golden-section refinement around the best point.
    let mut best_p = 1e-18;
    let mut best_v = objective(best_p);
    for i in 0..=2400 {
        let p = 10f64.powf(-18.0 + 18.0 * i as f64 / 2400.0).min(1.0);
        let v = objective(p);
        if v > best_v {
            best_v = v;
            best_p = p;
        }
    }
    let (mut lo, mut hi) = (best_p / 10.0, (best_p * 10.0).min(1.0));
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - gr * (hi - lo);
        let m2 = lo + gr * (hi - lo);
        if objective(m1) < objective(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let p_star_numeric = 0.5 * (lo + hi);
    let delta_e_numeric = objective(p_star_numeric);

    let exponent_window_ok = zeta > 0.0 && zeta < tau - 3.0;
    let gap_hierarchy_ok = delta >= 10.0 * alpha.max(beta);
    ErrorBudget {
        n,
        tau,
        zeta,
        v_well,
        alpha,
        beta_sq,
        beta,
        delta,
        p_opt: beta_sq / (delta * delta),
        delta_e: beta_sq / delta,
        delta_e_scale: beta_sq,
        cross_coulomb: v_well.powi(4) * nf.powf(4.0 - tau - zeta),
        magnetic_offsite: v_well * nf.powf(3.0 - 2.0 * tau),
        exponent_window_ok,
        gap_hierarchy_ok,
        hierarchy_ok: exponent_window_ok && gap_hierarchy_ok,
        p_star_numeric,
        delta_e_numeric,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_arithmetic() {
        let b = error_budget(10, 10.0, 4.0);
        assert!((b.delta_e_scale - 1e-6).abs() < 1e-18);
        assert!(b.exponent_window_ok);
        assert!(b.gap_hierarchy_ok);
    }

    #[test]
    fn boundary_raises_flag() {
        let b = error_budget(10, 7.0, 4.0); // zeta = tau - 3 exactly
        assert!(!b.exponent_window_ok);
        assert!(!b.hierarchy_ok);
    }

    #[test]
    fn numeric_maximizer_matches_analytic_scale() {
        let b = error_budget(10, 10.0, 4.0);
        let ratio = b.p_star_numeric / b.p_opt;
        assert!(
            ratio > 0.5 && ratio < 2.0,
            "p* {} vs beta^2/Delta^2 {}",
            b.p_star_numeric,
            b.p_opt
        );
        let val_ratio = b.delta_e_numeric / b.delta_e;
        assert!(val_ratio > 0.5 && val_ratio < 2.0, "ratio {val_ratio}");
    }
}
