//! Hamiltonian constructions and verification machinery for reducing
//! Pauli lattices down to Heisenberg, Hubbard, and continuum band models.
//!
//! The crate is organized around the reduction chain itself:
//!
//! * [`algebra`] — lattices, Pauli-string and fermionic Hamiltonians, the
//!   Jordan-Wigner transform, and sparse matrix realization.
//! * [`eigensolve`] — dense and Krylov spectra of Hermitian sparse operators.
//! * [`sw`] — second-order Schrieffer-Wolff effective Hamiltonians and
//!   deviation scans against exact spectra.
//! * [`gadgets`] — mediator-qubit gadget compilation, strength schedules,
//!   full reduction chains, and their verification harness.
//! * [`band`] — the Kronig-Penney band model, Wannier data, the Coulomb
//!   constant, and the error-budget arithmetic.
//! * [`dft`] — the universal functional on lattice spin densities and the
//!   density-functional ground-energy minimization.
//! * [`hf`] — Hartree-Fock energy/optimization and the Ising spin-glass
//!   embedding.

pub mod algebra;
pub mod band;
pub mod dft;
pub mod eigensolve;
pub mod gadgets;
pub mod hf;
pub mod sw;

pub use algebra::{
    build_heisenberg, build_hubbard, build_pauli_lattice, jordan_wigner, FermionHamiltonian,
    FermionTerm, LatticeGraph, LatticeLayout, ModeOrdering, PauliAxis, PauliString,
    SpinHamiltonian,
};
pub use eigensolve::{lowest_eigs, spectral_gap, SparseOperator, Spectrum};

/// Coefficients with magnitude below this are dropped during canonical merges.
pub const COEFF_EPS: f64 = 1e-15;

/// Largest matrix dimension `to_matrix` will realize without an explicit cap.
pub const DEFAULT_DIM_CAP: usize = 1 << 17;
