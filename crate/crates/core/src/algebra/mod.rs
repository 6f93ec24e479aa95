//! Lattices, Pauli-string and fermionic Hamiltonians, and the conversions
//! between them.
//!
//! All types are immutable after construction and canonicalized on the way
//! in: term lists are sorted, merged, and stripped of coefficients below
//! [`crate::COEFF_EPS`], so two Hamiltonians assembled from differently
//! ordered term lists compare equal.

mod fermion;
mod lattice;
pub(crate) mod matrix;
mod pauli;
mod text;

pub use fermion::{sector_basis, FermionHamiltonian, FermionOp, FermionTerm, ModeOrdering, Spin};
pub use lattice::{LatticeGraph, LatticeLayout};
pub use matrix::number_operator;
pub use pauli::{rotation_to_z, PauliAxis, PauliString, SpinHamiltonian};

use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors from Hamiltonian construction and conversion.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("coupling references edge ({0}, {1}) which is not in the lattice")]
    CouplingOnNonEdge(usize, usize),
    #[error("coupling strength {0} exceeds the |lambda| <= 1 contract")]
    CouplingTooStrong(f64),
    #[error("qubit index {index} out of range for {nqubits} qubits")]
    QubitOutOfRange { index: usize, nqubits: usize },
    #[error("mode index {index} out of range for {nmodes} modes")]
    ModeOutOfRange { index: usize, nmodes: usize },
    #[error("term list is not Hermitian: no conjugate partner for a term with coefficient {0}")]
    NotHermitian(Complex64),
    #[error("mode ordering covers {ordering} modes but the Hamiltonian has {hamiltonian}")]
    OrderingSizeMismatch { ordering: usize, hamiltonian: usize },
    #[error("mode ordering is not a bijection")]
    OrderingNotBijective,
    #[error("sector restriction requires a particle-number-conserving Hamiltonian")]
    SectorNotNumberConserving,
    #[error("operator dimension {required} exceeds the configured cap {cap}")]
    DimensionCap { required: usize, cap: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Jordan-Wigner transform of a fermionic Hamiltonian under a fixed mode
/// ordering.
///
/// Each annihilator maps to a Z-string followed by a lowering operator,
///
/// ```text
/// a_m  ->  Z_0 ... Z_{m-1} (X_m + i Y_m) / 2
/// ```
///
/// with the modes laid out by `ordering` (default: row-wise sites, spin-up
/// before spin-down). Spectra are preserved exactly; the emitted Pauli
/// coefficients are real because the input is Hermitian.
pub fn jordan_wigner(
    h: &FermionHamiltonian,
    ordering: &ModeOrdering,
) -> Result<SpinHamiltonian, AlgebraError> {
    if ordering.nmodes() != h.nmodes() {
        return Err(AlgebraError::OrderingSizeMismatch {
            ordering: ordering.nmodes(),
            hamiltonian: h.nmodes(),
        });
    }
    let nqubits = h.nmodes();

    // Accumulate complex-weighted Pauli strings keyed by their factor map.
    let mut acc: BTreeMap<Vec<(usize, PauliAxis)>, Complex64> = BTreeMap::new();

    for term in h.terms() {
        // Expand the product of ladder operators into Pauli strings. Each
        // ladder operator contributes a Z-string and (X +- iY)/2, so a term
        // with k operators expands into 2^k strings.
        let mut strings: Vec<(Vec<(usize, PauliAxis)>, Complex64)> =
            vec![(Vec::new(), term.coefficient())];
        for op in term.operators() {
            let qubit = ordering.qubit_of_mode(op.mode);
            let mut zstring: Vec<(usize, PauliAxis)> = (0..qubit)
                .map(|q| (ordering.qubit_of_mode(q), PauliAxis::Z))
                .collect();
            zstring.sort_unstable_by_key(|&(q, _)| q);
            // sigma^- = (X + iY)/2 annihilates; sigma^+ = (X - iY)/2 creates.
            let y_sign = if op.dagger { -0.5 } else { 0.5 };
            let mut x_part = zstring.clone();
            x_part.push((qubit, PauliAxis::X));
            let mut y_part = zstring;
            y_part.push((qubit, PauliAxis::Y));
            let branches = [
                (x_part, Complex64::new(0.5, 0.0)),
                (y_part, Complex64::new(0.0, y_sign)),
            ];

            let mut next = Vec::with_capacity(strings.len() * 2);
            for (left, lc) in &strings {
                for (right, rc) in &branches {
                    let (prod, phase) = pauli::multiply_factor_maps(left, right);
                    next.push((prod, lc * rc * phase));
                }
            }
            strings = next;
        }
        for (factors, coeff) in strings {
            *acc.entry(factors).or_insert(Complex64::ZERO) += coeff;
        }
    }

    // Hermiticity of the input guarantees real coefficients up to rounding.
    let mut terms = Vec::with_capacity(acc.len());
    for (factors, coeff) in acc {
        debug_assert!(
            coeff.im.abs() < 1e-12,
            "Jordan-Wigner produced an imaginary coefficient {coeff} on a Hermitian input"
        );
        if coeff.re.abs() >= crate::COEFF_EPS {
            terms.push(PauliString::from_factor_map(factors, coeff.re));
        }
    }
    SpinHamiltonian::new(nqubits, terms)
}

/// One Pauli string per requested coupling, `lambda * A_i (x) B_j` on the
/// endpoints of a lattice edge.
pub fn build_pauli_lattice(
    lattice: &LatticeGraph,
    couplings: &[((usize, usize), PauliAxis, PauliAxis, f64)],
) -> Result<SpinHamiltonian, AlgebraError> {
    let mut terms = Vec::with_capacity(couplings.len());
    for &((a, b), axis_a, axis_b, lambda) in couplings {
        if lambda.abs() > 1.0 + 1e-12 {
            return Err(AlgebraError::CouplingTooStrong(lambda));
        }
        if !lattice.has_edge(a, b) {
            return Err(AlgebraError::CouplingOnNonEdge(a, b));
        }
        terms.push(PauliString::two_qubit(a, axis_a, b, axis_b, lambda));
    }
    SpinHamiltonian::new(lattice.nsites(), terms)
}

/// Heisenberg Hamiltonian with per-site fields,
/// `J sum_<ij> sigma_i . sigma_j - sum_i B_i . sigma_i`.
///
/// Zero field components are skipped, so the term count is three per edge
/// plus one per nonzero field component.
pub fn build_heisenberg(
    lattice: &LatticeGraph,
    j: f64,
    fields: &[[f64; 3]],
) -> Result<SpinHamiltonian, AlgebraError> {
    if lattice.nsites() == 0 {
        return Err(AlgebraError::InvalidLattice("empty lattice".into()));
    }
    if fields.len() != lattice.nsites() {
        return Err(AlgebraError::InvalidLattice(format!(
            "{} field vectors for {} sites",
            fields.len(),
            lattice.nsites()
        )));
    }
    let mut terms = Vec::new();
    for &(a, b) in lattice.edges() {
        for axis in PauliAxis::ALL {
            terms.push(PauliString::two_qubit(a, axis, b, axis, j));
        }
    }
    for (site, field) in fields.iter().enumerate() {
        for (component, axis) in field.iter().zip(PauliAxis::ALL) {
            if *component != 0.0 {
                terms.push(PauliString::single_qubit(site, axis, -component));
            }
        }
    }
    SpinHamiltonian::new(lattice.nsites(), terms)
}

/// Hubbard Hamiltonian with per-site magnetic fields,
/// `-t sum a+_{i,s} a_{j,s} + U sum n_up n_dn - sum B_i . sigma_i`,
/// with two modes per site under the standard ordering and the field
/// expanded into quadratic fermion terms via
/// `sigma^a_i = sum_{s,s'} sigma^a_{ss'} a+_{i,s} a_{i,s'}`.
pub fn build_hubbard(
    lattice: &LatticeGraph,
    t: f64,
    u: f64,
    fields: &[[f64; 3]],
) -> Result<FermionHamiltonian, AlgebraError> {
    if fields.len() != lattice.nsites() {
        return Err(AlgebraError::InvalidLattice(format!(
            "{} field vectors for {} sites",
            fields.len(),
            lattice.nsites()
        )));
    }
    let ordering = ModeOrdering::standard(lattice.nsites());
    let nmodes = ordering.nmodes();
    let mut terms: Vec<FermionTerm> = Vec::new();

    for &(i, j) in lattice.edges() {
        for spin in [Spin::Up, Spin::Down] {
            let mi = ordering.mode(i, spin);
            let mj = ordering.mode(j, spin);
            // Hopping in both directions keeps the term list Hermitian.
            terms.push(FermionTerm::hopping(mi, mj, Complex64::new(-t, 0.0)));
            terms.push(FermionTerm::hopping(mj, mi, Complex64::new(-t, 0.0)));
        }
    }
    for (site, field) in fields.iter().enumerate() {
        let up = ordering.mode(site, Spin::Up);
        let dn = ordering.mode(site, Spin::Down);
        if u != 0.0 {
            // U n_up n_dn, normal ordered: a+_up a+_dn a_dn a_up.
            terms.push(FermionTerm::new(
                vec![
                    FermionOp::dag(up),
                    FermionOp::dag(dn),
                    FermionOp::ann(dn),
                    FermionOp::ann(up),
                ],
                Complex64::new(u, 0.0),
            ));
        }
        let [bx, by, bz] = *field;
        // -B.sigma with sigma^x = a+_up a_dn + a+_dn a_up,
        // sigma^y = -i a+_up a_dn + i a+_dn a_up, sigma^z = n_up - n_dn.
        let updn = Complex64::new(-bx, by);
        let dnup = Complex64::new(-bx, -by);
        if updn != Complex64::ZERO {
            terms.push(FermionTerm::hopping(up, dn, updn));
            terms.push(FermionTerm::hopping(dn, up, dnup));
        }
        if bz != 0.0 {
            terms.push(FermionTerm::hopping(up, up, Complex64::new(-bz, 0.0)));
            terms.push(FermionTerm::hopping(dn, dn, Complex64::new(bz, 0.0)));
        }
    }
    FermionHamiltonian::new(nmodes, terms, None)
}
