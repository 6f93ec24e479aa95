//! Sparse matrix realization of spin and fermionic Hamiltonians.
//!
//! Qubit/mode `m` is bit `m` of the basis index (little-endian), so the
//! fermionic occupation basis and the Jordan-Wigner qubit basis coincide
//! index for index and spectra can be compared directly.

use super::{AlgebraError, FermionHamiltonian, FermionOp, PauliAxis, SpinHamiltonian};
use crate::eigensolve::SparseOperator;
use num_complex::Complex64;

impl SpinHamiltonian {
    /// Realize as a sparse Hermitian matrix of dimension `2^nqubits`.
    pub fn to_matrix(&self) -> Result<SparseOperator, AlgebraError> {
        self.to_matrix_capped(crate::DEFAULT_DIM_CAP)
    }

    pub fn to_matrix_capped(&self, cap: usize) -> Result<SparseOperator, AlgebraError> {
        if self.nqubits() >= usize::BITS as usize - 1 {
            return Err(AlgebraError::DimensionCap {
                required: usize::MAX,
                cap,
            });
        }
        let dim = 1usize << self.nqubits();
        if dim > cap {
            return Err(AlgebraError::DimensionCap { required: dim, cap });
        }
        let mut entries = Vec::with_capacity(self.terms().len() * dim);
        for term in self.terms() {
            let mut flip = 0usize;
            for &(q, axis) in term.factors() {
                if axis != PauliAxis::Z {
                    flip |= 1 << q;
                }
            }
            for col in 0..dim {
                let mut amp = Complex64::new(term.coefficient(), 0.0);
                for &(q, axis) in term.factors() {
                    let bit = (col >> q) & 1;
                    match axis {
                        PauliAxis::X => {}
                        // Y|0> = i|1>, Y|1> = -i|0>
                        PauliAxis::Y => {
                            amp *= if bit == 0 {
                                Complex64::new(0.0, 1.0)
                            } else {
                                Complex64::new(0.0, -1.0)
                            }
                        }
                        PauliAxis::Z => {
                            if bit == 1 {
                                amp = -amp;
                            }
                        }
                    }
                }
                entries.push((col ^ flip, col, amp));
            }
        }
        SparseOperator::from_entries_unchecked(dim, entries)
            .map_err(|_| AlgebraError::DimensionCap { required: dim, cap })
    }
}

impl FermionHamiltonian {
    /// Realize in the occupation basis: the full Fock space, or the fixed
    /// particle-number sector recorded on the Hamiltonian.
    ///
    /// Sector bases are enumerated in lexicographic bitmask order; ladder
    /// signs count the set bits below the target mode.
    pub fn to_matrix(&self) -> Result<SparseOperator, AlgebraError> {
        self.to_matrix_capped(crate::DEFAULT_DIM_CAP)
    }

    pub fn to_matrix_capped(&self, cap: usize) -> Result<SparseOperator, AlgebraError> {
        match self.sector() {
            None => self.fock_matrix(cap),
            Some(n) => self.sector_matrix(n, cap),
        }
    }

    fn fock_matrix(&self, cap: usize) -> Result<SparseOperator, AlgebraError> {
        let dim = 1usize << self.nmodes();
        if dim > cap {
            return Err(AlgebraError::DimensionCap { required: dim, cap });
        }
        let mut entries = Vec::new();
        for term in self.terms() {
            for col in 0..dim as u64 {
                if let Some((row, sign)) = apply_ladder_product(term.operators(), col) {
                    entries.push((row as usize, col as usize, term.coefficient() * sign));
                }
            }
        }
        SparseOperator::from_entries_unchecked(dim, entries)
            .map_err(|_| AlgebraError::DimensionCap { required: dim, cap })
    }

    fn sector_matrix(&self, particles: usize, cap: usize) -> Result<SparseOperator, AlgebraError> {
        if !self.conserves_number() {
            return Err(AlgebraError::SectorNotNumberConserving);
        }
        let basis = super::sector_basis(self.nmodes(), particles);
        let dim = basis.len();
        if dim > cap {
            return Err(AlgebraError::DimensionCap { required: dim, cap });
        }
        let index_of = |mask: u64| basis.binary_search(&mask).expect("closed sector");
        let mut entries = Vec::new();
        for term in self.terms() {
            for (col, &mask) in basis.iter().enumerate() {
                if let Some((row_mask, sign)) = apply_ladder_product(term.operators(), mask) {
                    entries.push((index_of(row_mask), col, term.coefficient() * sign));
                }
            }
        }
        SparseOperator::from_entries_unchecked(dim, entries)
            .map_err(|_| AlgebraError::DimensionCap { required: dim, cap })
    }
}

/// Apply an ordered ladder-operator product to an occupation bitmask.
/// Operators act right to left. Returns the resulting mask and the
/// accumulated fermionic sign, or `None` when the state is annihilated.
pub(crate) fn apply_ladder_product(ops: &[FermionOp], mask: u64) -> Option<(u64, f64)> {
    let mut state = mask;
    let mut sign = 1.0f64;
    for op in ops.iter().rev() {
        let bit = 1u64 << op.mode;
        let occupied = state & bit != 0;
        if op.dagger == occupied {
            return None; // create on occupied / annihilate on empty
        }
        let below = (state & (bit - 1)).count_ones();
        if below % 2 == 1 {
            sign = -sign;
        }
        state ^= bit;
    }
    Some((state, sign))
}

/// Total particle-number operator on `nmodes` modes.
pub fn number_operator(nmodes: usize) -> FermionHamiltonian {
    let terms = (0..nmodes)
        .map(|m| super::FermionTerm::hopping(m, m, Complex64::ONE))
        .collect();
    FermionHamiltonian::new(nmodes, terms, None).expect("number operator is Hermitian")
}
