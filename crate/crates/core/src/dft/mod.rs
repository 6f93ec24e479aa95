//! Density-functional machinery on lattice spin densities.
//!
//! The universal functional
//!
//! ```text
//! F[rho] = min { tr[(T + I) Omega] : Omega an N-electron state with
//!                site-resolved spin density rho }
//! ```
//!
//! is defined over mixed states, which makes it convex and makes the
//! ground-energy problem `E_0 = min_rho { tr(V rho) + F[rho] }` a convex
//! program over the density polytope. The polytope is exactly
//! `{0 <= rho_i <= 1 per 2x2 block, sum of traces = N}`: any such
//! collection extends to a valid one-particle density matrix, so
//! representability never constrains beyond the block bounds.

mod functional;
mod ground;

pub use functional::{
    density_of_state, universal_functional, Certificate, DftOpts, FunctionalMethod,
    FunctionalResult,
};
pub use ground::{convexity_probe, dft_ground_energy, ConvexityReport, GroundResult};

use crate::algebra::AlgebraError;
use crate::eigensolve::EigenError;
use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DftError {
    #[error("density block {site} violates {what}")]
    BadDensity { site: usize, what: String },
    #[error("block traces sum to {got}, expected N = {expected}")]
    WrongElectronCount { got: f64, expected: usize },
    #[error("kernel contains an external potential term on site {site}; only hopping and interaction are allowed")]
    KernelHasPotential { site: usize },
    #[error("kernel and density disagree on the site count: {kernel} vs {density}")]
    SiteMismatch { kernel: usize, density: usize },
    #[error("dual ascent diverged (|v| = {norm:.3e}); the density appears unrepresentable")]
    UnboundedDual { norm: f64 },
    #[error("descent stalled above tolerance: best value {best}, residual {residual:.3e}")]
    Stalled { best: f64, residual: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Per-site 2x2 Hermitian spin-density blocks
/// `rho_i[s', s] = <a+_{i,s} a_{i,s'}>` with a fixed electron count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinDensity {
    blocks: Vec<Matrix2<Complex64>>,
    electrons: usize,
}

impl SpinDensity {
    /// Validates Hermiticity, the spectral window `[0, 1]` per block, and
    /// the total trace.
    pub fn new(blocks: Vec<Matrix2<Complex64>>, electrons: usize) -> Result<Self, DftError> {
        let mut trace = 0.0;
        for (site, b) in blocks.iter().enumerate() {
            let herm = (b - b.adjoint()).norm();
            if herm > 1e-10 {
                return Err(DftError::BadDensity {
                    site,
                    what: format!("Hermiticity (residual {herm:.3e})"),
                });
            }
            let eigs = b.symmetric_eigen().eigenvalues;
            for &e in eigs.iter() {
                if !(-1e-9..=1.0 + 1e-9).contains(&e) {
                    return Err(DftError::BadDensity {
                        site,
                        what: format!("eigenvalue {e} outside [0, 1]"),
                    });
                }
            }
            trace += b.trace().re;
        }
        if (trace - electrons as f64).abs() > 1e-8 {
            return Err(DftError::WrongElectronCount {
                got: trace,
                expected: electrons,
            });
        }
        Ok(Self { blocks, electrons })
    }

    /// The uniform density: every block `(N / 2M) I`.
    pub fn uniform(nsites: usize, electrons: usize) -> Self {
        let fill = electrons as f64 / (2.0 * nsites as f64);
        Self {
            blocks: vec![Matrix2::identity() * Complex64::new(fill, 0.0); nsites],
            electrons,
        }
    }

    pub fn nsites(&self) -> usize {
        self.blocks.len()
    }

    pub fn electrons(&self) -> usize {
        self.electrons
    }

    pub fn blocks(&self) -> &[Matrix2<Complex64>] {
        &self.blocks
    }

    /// Convex combination `(1 - w) self + w other`.
    pub fn mix(&self, other: &SpinDensity, w: f64) -> SpinDensity {
        let blocks = self
            .blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| a * Complex64::new(1.0 - w, 0.0) + b * Complex64::new(w, 0.0))
            .collect();
        SpinDensity {
            blocks,
            electrons: self.electrons,
        }
    }

    /// Midpoint of two densities.
    pub fn midpoint(&self, other: &SpinDensity) -> SpinDensity {
        self.mix(other, 0.5)
    }

    /// `sum_i tr(v_i rho_i)`, real for Hermitian arguments.
    pub fn energy_against(&self, potentials: &[Matrix2<Complex64>]) -> f64 {
        self.blocks
            .iter()
            .zip(potentials.iter())
            .map(|(rho, v)| (v * rho).trace().re)
            .sum()
    }

    /// Frobenius distance across blocks.
    pub fn distance(&self, other: &SpinDensity) -> f64 {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| (a - b).norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("density serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
