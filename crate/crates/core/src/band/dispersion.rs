//! Bound-band dispersion of the periodic delta-well model.
//!
//! Between wells `psi'' = kappa^2 psi`; each well imposes the derivative
//! jump `-2 V psi`. The transfer-matrix quantization condition for the
//! bound band is
//!
//! ```text
//! cos k = cosh(kappa) - (V / kappa) sinh(kappa)
//! ```
//!
//! solved per k by bracketed bisection. For deep wells
//! `kappa(k) ~ V + 2 V e^-V cos k`, so the bandwidth decays as `e^-V`
//! times a polynomial prefactor (`4 V^2 e^-V` under the half convention).

use super::{BandError, BandModelParams};
use num_complex::Complex64;
use serde::Serialize;

/// One bound band on a symmetric k grid.
#[derive(Debug, Clone, Serialize)]
pub struct BlochBand {
    pub v_well: f64,
    pub k: Vec<f64>,
    pub kappa: Vec<f64>,
    pub energy: Vec<f64>,
    /// Matching coefficient `Y(k) = (e^{ik+kappa} - 1) / (e^kappa - e^{ik})`.
    pub y: Vec<Complex64>,
    pub convention: super::KineticConvention,
    /// Bandwidth `E(pi) - E(0)` and the printed reference scales it is
    /// compared against (recorded, not asserted).
    pub bandwidth: f64,
    /// `bandwidth / (c V e^-V)` with c fixed by the convention.
    pub ratio_printed_form: f64,
    /// `bandwidth / (c V^2 e^-V)`: the exact model's leading prefactor.
    pub ratio_model_form: f64,
}

impl BlochBand {
    /// CSV rendering: `k,kappa,energy` (energies in model units).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,kappa,energy\n");
        for i in 0..self.k.len() {
            out.push_str(&format!(
                "{:.12e},{:.12e},{:.12e}\n",
                self.k[i], self.kappa[i], self.energy[i]
            ));
        }
        out
    }
}

/// Quantization condition residual for the bound band.
fn dispersion_relation(v: f64, kappa: f64, k: f64) -> f64 {
    kappa.cosh() - v / kappa * kappa.sinh() - k.cos()
}

/// Solve `kappa(k)` by bisection inside an expanding bracket around `V`.
fn solve_kappa(v: f64, k: f64) -> Result<f64, BandError> {
    let f = |kappa: f64| dispersion_relation(v, kappa, k);
    let mut lo = (v - 2.0).max(0.3 * v).max(0.5);
    let mut hi = v + 2.0;
    let mut widen = 0;
    while f(lo) >= 0.0 {
        lo *= 0.5;
        widen += 1;
        if widen > 60 || lo < 1e-12 {
            return Err(BandError::NoBoundState { k });
        }
    }
    while f(hi) <= 0.0 {
        hi *= 1.5;
        widen += 1;
        if widen > 60 {
            return Err(BandError::NoBoundState { k });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * (1.0 + hi.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Dispersion on a symmetric inclusive grid of `kpoints + 1` momenta
/// covering `[-pi, pi]`.
pub fn solve_dispersion(params: &BandModelParams, kpoints: usize) -> Result<BlochBand, BandError> {
    if params.v_well < 3.0 {
        return Err(BandError::WellTooShallow(params.v_well));
    }
    let v = params.v_well;
    let n = kpoints.max(2);
    let k: Vec<f64> = (0..=n)
        .map(|i| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64)
        .collect();
    let mut kappa = Vec::with_capacity(k.len());
    let mut energy = Vec::with_capacity(k.len());
    let mut y = Vec::with_capacity(k.len());
    for &ki in &k {
        let kap = solve_kappa(v, ki)?;
        kappa.push(kap);
        energy.push(params.convention.energy_of_kappa(kap));
        let eik = Complex64::new(0.0, ki).exp();
        let yk = (eik * kap.exp() - Complex64::ONE) / (Complex64::new(kap.exp(), 0.0) - eik);
        y.push(yk);
    }
    let e_at = |kk: f64| -> f64 {
        let kap = solve_kappa(v, kk).expect("interior momenta solved above");
        params.convention.energy_of_kappa(kap)
    };
    let bandwidth = e_at(std::f64::consts::PI) - e_at(0.0);
    let conv_factor = match params.convention {
        super::KineticConvention::Half => 4.0,
        super::KineticConvention::Unit => 8.0,
    };
    Ok(BlochBand {
        v_well: v,
        k,
        kappa,
        energy,
        y,
        convention: params.convention,
        bandwidth,
        ratio_printed_form: bandwidth / (conv_factor * v * (-v).exp()),
        ratio_model_form: bandwidth / (conv_factor * v * v * (-v).exp()),
    })
}

pub(super) fn kappa_of(v: f64, k: f64) -> Result<f64, BandError> {
    solve_kappa(v, k)
}

#[cfg(test)]
mod tests {
    use super::super::{BandModelParams, KineticConvention};
    use super::*;

    #[test]
    fn dispersion_is_symmetric_and_bounded() {
        let p = BandModelParams::new(8.0, 16, KineticConvention::Half).unwrap();
        let band = solve_dispersion(&p, 32).unwrap();
        assert!(band.bandwidth > 0.0);
        let m = band.k.len();
        for i in 0..m {
            // E(k) = E(-k) exactly on the symmetric grid.
            assert!((band.energy[i] - band.energy[m - 1 - i]).abs() < 1e-12);
            // Band entirely below the continuum edge.
            assert!(band.energy[i] < 0.0);
        }
    }

    #[test]
    fn single_well_limit_kappa_approaches_v() {
        // Jump -2 V psi(0) gives an isolated-well decay constant kappa = V;
        // the band collapses onto it exponentially.
        let v = 12.0;
        let kap = solve_kappa(v, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((kap - v).abs() < 3.0 * v * (-v).exp() + 1e-9, "kappa {kap}");
    }

    #[test]
    fn leading_kappa_correction_matches_expansion() {
        let v = 10.0;
        for k in [0.0, 1.0, std::f64::consts::PI] {
            let kap = solve_kappa(v, k).unwrap();
            let expansion = v + 2.0 * v * (-v).exp() * k.cos();
            assert!(
                (kap - expansion).abs() < 20.0 * v * v * (-2.0 * v).exp() + 1e-12,
                "k={k}: kappa {kap} vs {expansion}"
            );
        }
    }
}
