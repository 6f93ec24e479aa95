//! Gadget verification: exact diagonalization, contraction onto the
//! mediator ground sector, and least-squares fits in the Pauli basis.
//!
//! The "measured" effective coupling is deliberately independent of the
//! Schrieffer-Wolff machinery: the lowest `2^k` exact eigenpairs are
//! contracted against the mediator ground states, orthonormalized, and the
//! resulting operator is decomposed in the two-qubit Pauli basis. Constant
//! shifts land in the identity coefficient and are discarded, matching the
//! "up to a constant" convention of the predictions.

use super::{GadgetError, GadgetSpec, PredictedCoupling};
use crate::algebra::PauliAxis;
use crate::eigensolve::{self, SparseOperator};
use crate::sw::{self, BlockSplit, EffectiveReport};
use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

fn pauli_matrix(axis: Option<PauliAxis>) -> Matrix2<Complex64> {
    let o = Complex64::ZERO;
    let i = Complex64::ONE;
    let im = Complex64::new(0.0, 1.0);
    match axis {
        None => Matrix2::new(i, o, o, i),
        Some(PauliAxis::X) => Matrix2::new(o, i, i, o),
        Some(PauliAxis::Y) => Matrix2::new(o, -im, im, o),
        Some(PauliAxis::Z) => Matrix2::new(i, o, o, -i),
    }
}

/// Ground state of a field `(B/2)(1 - cos(phi) P - sin(phi) Q)`.
pub(super) fn ground_of_field(axes: (PauliAxis, PauliAxis), phi: f64) -> Vector2<Complex64> {
    let m = pauli_matrix(Some(axes.0)) * Complex64::new(-phi.cos(), 0.0)
        + pauli_matrix(Some(axes.1)) * Complex64::new(-phi.sin(), 0.0);
    let eig = m.symmetric_eigen();
    let idx = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        0
    } else {
        1
    };
    Vector2::from_iterator(eig.eigenvectors.column(idx).iter().copied())
}

/// Coefficients of an operator in the n-qubit Pauli product basis.
/// `factors[q] = None` means identity on qubit `q` (qubits in slot order).
#[derive(Debug, Clone)]
pub struct PauliFit {
    pub nqubits: usize,
    pub coefficients: Vec<(Vec<Option<PauliAxis>>, f64)>,
}

impl PauliFit {
    /// Coefficient of a specific product (identity slots = `None`).
    pub fn coefficient(&self, factors: &[Option<PauliAxis>]) -> f64 {
        self.coefficients
            .iter()
            .find(|(f, _)| f == factors)
            .map(|&(_, c)| c)
            .unwrap_or(0.0)
    }

    /// Largest |coefficient| among products supported on every qubit in
    /// `slots` (used for cross-talk detection).
    pub fn max_supported_on(&self, slots: &[usize]) -> f64 {
        self.coefficients
            .iter()
            .filter(|(f, _)| slots.iter().all(|&s| f[s].is_some()))
            .map(|&(_, c)| c.abs())
            .fold(0.0, f64::max)
    }
}

/// Decompose a Hermitian `2^n`-dimensional operator over Pauli products:
/// `c_P = tr(P M) / 2^n`.
pub fn fit_pauli_basis(m: &DMatrix<Complex64>, nqubits: usize) -> PauliFit {
    let dim = 1usize << nqubits;
    assert_eq!(m.nrows(), dim);
    let options = [
        None,
        Some(PauliAxis::X),
        Some(PauliAxis::Y),
        Some(PauliAxis::Z),
    ];
    let mut coefficients = Vec::with_capacity(4usize.pow(nqubits as u32));
    let mut stack = vec![Vec::with_capacity(nqubits)];
    while let Some(partial) = stack.pop() {
        if partial.len() == nqubits {
            let c = pauli_trace(m, &partial) / dim as f64;
            coefficients.push((partial, c));
            continue;
        }
        for opt in options.iter().rev() {
            let mut next = partial.clone();
            next.push(*opt);
            stack.push(next);
        }
    }
    PauliFit {
        nqubits,
        coefficients,
    }
}

/// `Re tr((P_0 (x) ... (x) P_{n-1}) M)` without materializing the product:
/// qubit `q` is bit `q` of the matrix index.
fn pauli_trace(m: &DMatrix<Complex64>, factors: &[Option<PauliAxis>]) -> f64 {
    let n = factors.len();
    let dim = 1usize << n;
    let mut acc = Complex64::ZERO;
    for row in 0..dim {
        // P maps |col> to phase |row>: col determined bitwise.
        let mut col = 0usize;
        let mut phase = Complex64::ONE;
        let mut ok = true;
        for (q, f) in factors.iter().enumerate() {
            let r = (row >> q) & 1;
            let p = pauli_matrix(*f);
            // Find the column bit c with p[(r, c)] != 0 (Paulis have exactly
            // one nonzero per row).
            let (c, val) = if p[(r, 0)].norm_sqr() != 0.0 {
                (0usize, p[(r, 0)])
            } else if p[(r, 1)].norm_sqr() != 0.0 {
                (1usize, p[(r, 1)])
            } else {
                ok = false;
                break;
            };
            col |= c << q;
            phase *= val;
        }
        if ok {
            acc += phase * m[(col, row)];
        }
    }
    debug_assert!(
        acc.im.abs() < 1e-9 * (1.0 + acc.re.abs()),
        "non-Hermitian fit input"
    );
    acc.re
}

/// Contract the lowest `2^outer.len()` exact eigenpairs of `op` against the
/// mediator ground states, orthonormalize, and return the measured effective
/// operator on the outer qubits together with the exact eigenvalues used.
pub fn effective_operator_from_exact(
    op: &SparseOperator,
    nqubits: usize,
    mediators: &[(usize, Vector2<Complex64>)],
    outer: &[usize],
) -> Result<(DMatrix<Complex64>, Vec<f64>), GadgetError> {
    debug_assert_eq!(1usize << nqubits, op.dim());
    debug_assert_eq!(mediators.len() + outer.len(), nqubits);
    let low_dim = 1usize << outer.len();
    let spec = eigensolve::lowest_eigs(op, low_dim, 1e-10)?;
    let vectors = spec.vectors.as_ref().expect("dense path returns vectors");

    // t_i[o] = sum_m conj(g[m]) v_i[index(o, m)]
    let mut contracted: Vec<Vec<Complex64>> = Vec::with_capacity(low_dim);
    for v in vectors {
        let mut t = vec![Complex64::ZERO; low_dim];
        for (o_bits, slot) in t.iter_mut().enumerate() {
            let mut base = 0usize;
            for (k, &q) in outer.iter().enumerate() {
                base |= ((o_bits >> k) & 1) << q;
            }
            // Sum over mediator configurations.
            let nmed = mediators.len();
            for m_bits in 0..(1usize << nmed) {
                let mut idx = base;
                let mut amp = Complex64::ONE;
                for (k, (q, g)) in mediators.iter().enumerate() {
                    let bit = (m_bits >> k) & 1;
                    idx |= bit << q;
                    amp *= g[bit].conj();
                }
                *slot += amp * v[idx];
            }
        }
        contracted.push(t);
    }

    // Gram-Schmidt; the contractions are near-orthonormal when the low space
    // really is the mediator ground sector.
    for i in 0..contracted.len() {
        for j in 0..i {
            let proj: Complex64 = contracted[j]
                .iter()
                .zip(contracted[i].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let prev = contracted[j].clone();
            for (x, p) in contracted[i].iter_mut().zip(prev.iter()) {
                *x -= proj * p;
            }
        }
        let norm = contracted[i]
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm < 0.5 {
            return Err(GadgetError::LowSpaceMixed(norm));
        }
        contracted[i].iter_mut().for_each(|x| *x /= norm);
    }

    let mut m = DMatrix::<Complex64>::zeros(low_dim, low_dim);
    for (lambda, t) in spec.eigenvalues.iter().zip(contracted.iter()) {
        for r in 0..low_dim {
            for c in 0..low_dim {
                m[(r, c)] += Complex64::new(*lambda, 0.0) * t[r] * t[c].conj();
            }
        }
    }
    Ok((m, spec.eigenvalues))
}

/// Fit of a 4x4 effective operator over the two-qubit Pauli basis.
pub fn fit_two_qubit(m: &DMatrix<Complex64>) -> PauliFit {
    fit_pauli_basis(m, 2)
}

/// Everything a gadget verification produces: the Schrieffer-Wolff report,
/// the measured couplings, and their relative errors against prediction.
#[derive(Debug)]
pub struct GadgetVerification {
    pub report: EffectiveReport,
    pub measured: Vec<PredictedCoupling>,
    pub predicted: Vec<PredictedCoupling>,
    pub max_rel_error: f64,
    pub fit: PauliFit,
    pub in_regime: bool,
}

/// Orthonormal complement of a mediator ground state.
fn excited_of(g: &Vector2<Complex64>) -> Vector2<Complex64> {
    Vector2::new(-g[1].conj(), g[0].conj())
}

/// Low/high product bases `|outer> (x) |g/e>` for a three-qubit gadget with
/// the mediator on qubit 1. Column `o` of the low basis encodes the outer
/// bits as `left = o & 1`, `right = o >> 1`, matching the two-qubit fit
/// convention, so `H_eff` comes out directly interpretable.
fn gadget_split(
    h: &SparseOperator,
    v: &SparseOperator,
    ground: &Vector2<Complex64>,
) -> Result<BlockSplit, GadgetError> {
    let excited = excited_of(ground);
    let basis_for = |med: &Vector2<Complex64>| {
        let mut m = DMatrix::<Complex64>::zeros(8, 4);
        for o in 0..4usize {
            let (l, r) = (o & 1, o >> 1);
            for bit in 0..2usize {
                m[(l + 2 * bit + 4 * r, o)] = med[bit];
            }
        }
        m
    };
    Ok(BlockSplit::from_bases(
        h,
        v,
        basis_for(ground),
        basis_for(&excited),
    )?)
}

/// Build the gadget Hamiltonian, split on the mediator field, run the
/// second-order reduction, and measure the effective coupling from the
/// exact low spectrum.
pub fn verify_gadget(spec: &GadgetSpec) -> Result<GadgetVerification, GadgetError> {
    let h = spec.field_hamiltonian()?.to_matrix()?;
    let v = spec.coupling_hamiltonian()?.to_matrix()?;
    let split = gadget_split(&h, &v, &spec.mediator_ground())?;
    let report = sw::effective_hamiltonian_2nd_with_constant(&h, &v, &split, 20.0)?;

    let total = sw::sum_operators(&h, &v)?;
    let ground = spec.mediator_ground();
    let (m_eff, _) = effective_operator_from_exact(&total, 3, &[(1, ground)], &[0, 2])?;
    let fit = fit_two_qubit(&m_eff);

    let measured: Vec<PredictedCoupling> = spec
        .predicted
        .iter()
        .map(|p| PredictedCoupling {
            axes: p.axes,
            strength: fit.coefficient(&[Some(p.axes.0), Some(p.axes.1)]),
        })
        .collect();
    let max_rel_error = spec
        .predicted
        .iter()
        .zip(measured.iter())
        .map(|(p, m)| {
            if p.strength == 0.0 {
                m.strength.abs()
            } else {
                (m.strength - p.strength).abs() / p.strength.abs()
            }
        })
        .fold(0.0, f64::max);

    Ok(GadgetVerification {
        report,
        measured,
        predicted: spec.predicted.clone(),
        max_rel_error,
        fit,
        in_regime: spec.b_field >= super::REGIME_GUARD * spec.lambda,
    })
}

/// Cross-talk measurement for two gadgets sharing the middle outer qubit:
/// layout `a(0) - m1(1) - b(2) - m2(3) - c(4)`.
#[derive(Debug)]
pub struct CrossTalkReport {
    /// Largest |coefficient| over Pauli products acting on both end qubits.
    pub cross_coupling: f64,
    /// Measured couplings of each gadget inside the pair.
    pub left_measured: Vec<PredictedCoupling>,
    pub right_measured: Vec<PredictedCoupling>,
    pub fit: PauliFit,
}

pub fn verify_gadget_pair(
    left: &GadgetSpec,
    right: &GadgetSpec,
) -> Result<CrossTalkReport, GadgetError> {
    // Embed both three-qubit gadgets into the five-qubit chain.
    let embed_left = [0usize, 1, 2];
    let embed_right = [2usize, 3, 4];
    let mut h = crate::algebra::SpinHamiltonian::zero(5);
    for (spec, embed) in [(left, &embed_left), (right, &embed_right)] {
        let local = spec.hamiltonian()?;
        let terms: Vec<crate::algebra::PauliString> = local
            .terms()
            .iter()
            .map(|t| {
                crate::algebra::PauliString::new(
                    t.factors().iter().map(|&(q, a)| (embed[q], a)).collect(),
                    t.coefficient(),
                )
            })
            .collect();
        h = h.add(&crate::algebra::SpinHamiltonian::new(5, terms)?)?;
    }

    let op = h.to_matrix()?;
    let mediators = [
        (1usize, left.mediator_ground()),
        (3, right.mediator_ground()),
    ];
    let (m_eff, _) = effective_operator_from_exact(&op, 5, &mediators, &[0, 2, 4])?;
    let fit = fit_pauli_basis(&m_eff, 3);

    let measure = |spec: &GadgetSpec, slots: (usize, usize)| {
        spec.predicted
            .iter()
            .map(|p| {
                let mut factors = vec![None; 3];
                factors[slots.0] = Some(p.axes.0);
                factors[slots.1] = Some(p.axes.1);
                PredictedCoupling {
                    axes: p.axes,
                    strength: fit.coefficient(&factors),
                }
            })
            .collect::<Vec<_>>()
    };
    let left_measured = measure(left, (0, 1));
    let right_measured = measure(right, (1, 2));
    let cross_coupling = fit.max_supported_on(&[0, 2]);

    Ok(CrossTalkReport {
        cross_coupling,
        left_measured,
        right_measured,
        fit,
    })
}
