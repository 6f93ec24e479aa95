//! Second-order Schrieffer-Wolff effective Hamiltonians.
//!
//! For a block-diagonal `H` with low/high eigenspaces separated by a gap and
//! a bounded perturbation `V`, the low-energy physics of `H + V` is captured
//! to second order by
//!
//! ```text
//! H_eff = H_0 + V_0 - V_01 H_1^{-1} V_10
//! ```
//!
//! with an error of order `v^3 / Delta^2`. Only the resulting formula is
//! implemented; the block-rotated generator it comes from is proof
//! scaffolding, not a testable artifact.

use crate::eigensolve::{self, EigenError, SparseOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Off-diagonal tolerance for "H is block-diagonal in the split".
const BLOCK_DIAG_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SwError {
    #[error("energy cut {cut} passes within {guard:.3e} of eigenvalue {eigenvalue}")]
    DegenerateCut {
        cut: f64,
        eigenvalue: f64,
        guard: f64,
    },
    #[error("the split leaves no {0} subspace")]
    EmptyBlock(&'static str),
    #[error("H is not block-diagonal in the split: off-diagonal norm {0:.3e}")]
    NotBlockDiagonal(f64),
    #[error("high block is singular; the gap lower bound {0} is not positive")]
    SingularHighBlock(f64),
    #[error("deviation scan needs >= 3 field values spanning >= 2 decades, got {0:?}")]
    BadScan(Vec<f64>),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Orthonormal bases for the low and high eigenspaces of `H` below/above an
/// energy cut, with the measured gap and perturbation-norm bounds.
#[derive(Debug)]
pub struct BlockSplit {
    low: DMatrix<Complex64>,
    high: DMatrix<Complex64>,
    /// Lower bound on the high-block spectrum (the smallest high eigenvalue).
    pub delta: f64,
    /// Numerical bound max(||H_0||, ||V||) in operator norm.
    pub v_bound: f64,
}

impl BlockSplit {
    /// Split the exact eigenspaces of `h` at `cut`, refusing cuts that pass
    /// within `1e-8 * Delta` of an eigenvalue. `v` only enters the recorded
    /// norm bound.
    pub fn from_energy_cut(
        h: &SparseOperator,
        v: &SparseOperator,
        cut: f64,
    ) -> Result<Self, SwError> {
        let dense = h.to_dense();
        let eig = dense.symmetric_eigen();
        let dim = h.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("finite eigenvalues")
        });

        let low_idx: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| eig.eigenvalues[i] < cut)
            .collect();
        let high_idx: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| eig.eigenvalues[i] >= cut)
            .collect();
        if low_idx.is_empty() {
            return Err(SwError::EmptyBlock("low"));
        }
        if high_idx.is_empty() {
            return Err(SwError::EmptyBlock("high"));
        }

        let delta = eig.eigenvalues[high_idx[0]];
        if delta <= 0.0 {
            return Err(SwError::SingularHighBlock(delta));
        }
        let guard = 1e-8 * delta;
        for &i in order.iter() {
            if (eig.eigenvalues[i] - cut).abs() < guard {
                return Err(SwError::DegenerateCut {
                    cut,
                    eigenvalue: eig.eigenvalues[i],
                    guard,
                });
            }
        }

        let gather = |idx: &[usize]| {
            let mut m = DMatrix::zeros(dim, idx.len());
            for (col, &i) in idx.iter().enumerate() {
                m.column_mut(col).copy_from(&eig.eigenvectors.column(i));
            }
            m
        };
        let low = gather(&low_idx);
        let high = gather(&high_idx);

        let h0_norm = low_idx
            .iter()
            .map(|&i| eig.eigenvalues[i].abs())
            .fold(0.0f64, f64::max);
        let v_bound = h0_norm.max(v.op_norm());

        Ok(Self {
            low,
            high,
            delta,
            v_bound,
        })
    }

    /// Split along explicitly supplied orthonormal bases spanning the low
    /// and high eigenspaces of `h`. Useful when the caller wants `H_eff`
    /// expressed in a meaningful basis (e.g. a qubit product basis) instead
    /// of whatever order the eigensolver produced.
    pub fn from_bases(
        h: &SparseOperator,
        v: &SparseOperator,
        low: DMatrix<Complex64>,
        high: DMatrix<Complex64>,
    ) -> Result<Self, SwError> {
        let dim = h.dim();
        if low.ncols() == 0 {
            return Err(SwError::EmptyBlock("low"));
        }
        if high.ncols() == 0 {
            return Err(SwError::EmptyBlock("high"));
        }
        debug_assert_eq!(low.ncols() + high.ncols(), dim);
        debug_assert_eq!(low.nrows(), dim);

        let hd = h.to_dense();
        let h1 = high.adjoint() * &hd * &high;
        let mut high_eigs: Vec<f64> = h1.symmetric_eigen().eigenvalues.iter().copied().collect();
        high_eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let delta = high_eigs[0];
        if delta <= 0.0 {
            return Err(SwError::SingularHighBlock(delta));
        }

        let h0 = low.adjoint() * &hd * &low;
        let mut low_eigs: Vec<f64> = h0.symmetric_eigen().eigenvalues.iter().copied().collect();
        low_eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let h0_norm = low_eigs.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        let v_bound = h0_norm.max(v.op_norm());

        Ok(Self {
            low,
            high,
            delta,
            v_bound,
        })
    }

    pub fn low_dim(&self) -> usize {
        self.low.ncols()
    }

    pub fn low_basis(&self) -> &DMatrix<Complex64> {
        &self.low
    }
}

/// The effective Hamiltonian on the low block plus the bookkeeping needed to
/// judge it: the a-priori bound and the measured deviation from the exact
/// low spectrum of `H + V`.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveReport {
    /// Dense Hermitian `H_eff` on the low space.
    #[serde(skip)]
    pub h_eff: DMatrix<Complex64>,
    /// Eigenvalues of `H_eff`, ascending.
    pub eff_eigenvalues: Vec<f64>,
    /// The `low_dim` lowest exact eigenvalues of `H + V`.
    pub exact_eigenvalues: Vec<f64>,
    /// `max_i |exact_i - eff_i|` over the low block.
    pub measured_deviation: f64,
    /// `C * v^3 / Delta^2`.
    pub predicted_bound: f64,
    /// The constant `C` used in the bound.
    pub bound_constant: f64,
    pub delta: f64,
    pub v_bound: f64,
}

/// Second-order effective Hamiltonian `H_0 + V_0 - V_01 H_1^{-1} V_10`,
/// with the high block inverted by a dense solve.
pub fn effective_hamiltonian_2nd(
    h: &SparseOperator,
    v: &SparseOperator,
    split: &BlockSplit,
) -> Result<EffectiveReport, SwError> {
    effective_hamiltonian_2nd_with_constant(h, v, split, 1.0)
}

pub fn effective_hamiltonian_2nd_with_constant(
    h: &SparseOperator,
    v: &SparseOperator,
    split: &BlockSplit,
    bound_constant: f64,
) -> Result<EffectiveReport, SwError> {
    let hd = h.to_dense();
    let vd = v.to_dense();
    let w0 = &split.low;
    let w1 = &split.high;

    // H must not couple the blocks.
    let h01 = w0.adjoint() * &hd * w1;
    let off = h01.iter().map(|x| x.norm()).fold(0.0f64, f64::max);
    if off > BLOCK_DIAG_TOL * (1.0 + split.delta) {
        return Err(SwError::NotBlockDiagonal(off));
    }

    let h0 = w0.adjoint() * &hd * w0;
    let h1 = w1.adjoint() * &hd * w1;
    let v0 = w0.adjoint() * &vd * w0;
    let v01 = w0.adjoint() * &vd * w1;
    let v10 = v01.adjoint();

    // X = H_1^{-1} V_10 by dense solve; exactness here removes a noise
    // source when fitting deviation slopes.
    let lu = h1.lu();
    let x = lu
        .solve(&v10)
        .ok_or(SwError::SingularHighBlock(split.delta))?;
    let mut h_eff = h0 + v0 - v01 * x;

    // Hermitian to rounding; symmetrize to keep downstream eigensolves clean.
    let herm_residual = (&h_eff - h_eff.adjoint())
        .iter()
        .map(|x| x.norm())
        .fold(0.0f64, f64::max);
    debug_assert!(
        herm_residual < 1e-12 * (1.0 + split.v_bound),
        "H_eff asymmetry {herm_residual}"
    );
    h_eff = (h_eff.clone() + h_eff.adjoint()) * Complex64::new(0.5, 0.0);

    let d0 = split.low_dim();
    let mut eff_eigenvalues: Vec<f64> = h_eff
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eff_eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    // Exact low spectrum of H + V.
    let total = sum_operators(h, v)?;
    let exact = eigensolve::lowest_eigs(&total, d0, 1e-10)?;
    let measured_deviation = exact
        .eigenvalues
        .iter()
        .zip(eff_eigenvalues.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    Ok(EffectiveReport {
        h_eff,
        eff_eigenvalues,
        exact_eigenvalues: exact.eigenvalues,
        measured_deviation,
        predicted_bound: bound_constant * split.v_bound.powi(3) / (split.delta * split.delta),
        bound_constant,
        delta: split.delta,
        v_bound: split.v_bound,
    })
}

/// Deviation of the effective spectrum across a family of field strengths.
/// The builder maps a field value `B` to a finished report; at least three
/// values spanning two decades are required so a slope is meaningful.
pub fn deviation_scan<F>(builder: F, b_values: &[f64]) -> Result<Vec<(f64, f64)>, SwError>
where
    F: Fn(f64) -> Result<EffectiveReport, SwError>,
{
    let finite = b_values.iter().all(|b| b.is_finite() && *b > 0.0);
    let min = b_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = b_values.iter().cloned().fold(0.0f64, f64::max);
    if b_values.len() < 3 || !finite || max / min < 100.0 - 1e-9 {
        return Err(SwError::BadScan(b_values.to_vec()));
    }
    b_values
        .iter()
        .map(|&b| builder(b).map(|r| (b, r.measured_deviation)))
        .collect()
}

/// Sum of two sparse operators on the same dimension.
pub fn sum_operators(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator, EigenError> {
    debug_assert_eq!(a.dim(), b.dim());
    let mut entries = Vec::with_capacity(a.nnz() + b.nnz());
    for op in [a, b] {
        for row in 0..op.dim() {
            for (col, val) in op.row_entries(row) {
                entries.push((row, col, val));
            }
        }
    }
    SparseOperator::from_entries(a.dim(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PauliAxis, PauliString, SpinHamiltonian};

    fn two_level(delta: f64, v: f64) -> (SparseOperator, SparseOperator) {
        // H = delta |1><1| ; V = v (|0><1| + |1><0|) on a single qubit.
        let h = SpinHamiltonian::new(
            1,
            vec![
                PauliString::identity(delta / 2.0),
                PauliString::single_qubit(0, PauliAxis::Z, -delta / 2.0),
            ],
        )
        .unwrap();
        let vop =
            SpinHamiltonian::new(1, vec![PauliString::single_qubit(0, PauliAxis::X, v)]).unwrap();
        (h.to_matrix().unwrap(), vop.to_matrix().unwrap())
    }

    #[test]
    fn zero_perturbation_reproduces_h0() {
        let (h, _) = two_level(4.0, 0.3);
        let zero = SpinHamiltonian::zero(1).to_matrix().unwrap();
        let split = BlockSplit::from_energy_cut(&h, &zero, 2.0).unwrap();
        let report = effective_hamiltonian_2nd(&h, &zero, &split).unwrap();
        assert!(report.measured_deviation < 1e-12);
        assert!(report.eff_eigenvalues[0].abs() < 1e-12);
    }

    #[test]
    fn two_level_second_order_shift() {
        let (delta, v) = (10.0, 0.1);
        let (h, vop) = two_level(delta, v);
        let split = BlockSplit::from_energy_cut(&h, &vop, delta / 2.0).unwrap();
        let report = effective_hamiltonian_2nd(&h, &vop, &split).unwrap();
        // H_eff on |0> is the 1x1 value -v^2/Delta.
        assert_eq!(report.eff_eigenvalues.len(), 1);
        assert!((report.eff_eigenvalues[0] - (-v * v / delta)).abs() < 1e-12);
        // Exact ground energy Delta/2 - sqrt(Delta^2/4 + v^2).
        let exact = delta / 2.0 - (delta * delta / 4.0 + v * v).sqrt();
        assert!((report.exact_eigenvalues[0] - exact).abs() < 1e-12);
        assert!(report.measured_deviation <= report.predicted_bound);
    }

    #[test]
    fn cut_through_spectrum_is_refused() {
        let (h, vop) = two_level(4.0, 0.1);
        let err = BlockSplit::from_energy_cut(&h, &vop, 4.0).unwrap_err();
        assert!(matches!(err, SwError::DegenerateCut { .. }));
    }

    #[test]
    fn report_serializes_with_the_documented_fields() {
        let (h, vop) = two_level(10.0, 0.1);
        let split = BlockSplit::from_energy_cut(&h, &vop, 5.0).unwrap();
        let report = effective_hamiltonian_2nd(&h, &vop, &split).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        for key in [
            "eff_eigenvalues",
            "exact_eigenvalues",
            "measured_deviation",
            "predicted_bound",
            "delta",
            "v_bound",
        ] {
            assert!(json.contains(key), "missing {key}");
        }
    }

    #[test]
    fn scan_validates_span() {
        let bad = deviation_scan(|_| unreachable!(), &[10.0, 20.0, 30.0]);
        assert!(matches!(bad, Err(SwError::BadScan(_))));
        let too_few = deviation_scan(|_| unreachable!(), &[1.0, 1000.0]);
        assert!(matches!(too_few, Err(SwError::BadScan(_))));
    }
}
