//! Hartree-Fock energy and optimization for local fermionic Hamiltonians,
//! plus the Ising spin-glass embedding that makes the optimization landscape
//! provably hard.
//!
//! A determinant state is carried as its one-particle projector
//! `P = u^+ u` (Hermitian, idempotent, trace N). Expectations follow from
//! the two-point contraction rules:
//!
//! ```text
//! <a+_i a_j>           = P_ij
//! <a+_i a+_j a_k a_l>  = P_il P_jk - P_ik P_jl
//! ```
//!
//! with the quartic coefficients taken in the literal operator order
//! `H2[i,j,k,l] a+_i a+_j a_k a_l`, no implicit symmetrization.

mod energy;
mod ising;
mod optimize;

pub use energy::{hf_energy, FourIndex, HfState};
pub use ising::{
    classical_state, decode_spins, default_lambda, embed_ising, ising_bruteforce, DecodedSpins,
    IsingEmbedding, IsingInstance,
};
pub use optimize::{hf_optimize, HfOptimizeResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HfError {
    #[error("projector violates {0}: residual {1:.3e}")]
    BadProjector(&'static str, f64),
    #[error("matrix dimensions disagree: {0}")]
    DimensionMismatch(String),
    #[error("coupling ({i}, {j}) is not an edge of the {l}x{l}x2 lattice")]
    NotAnEdge { i: usize, j: usize, l: usize },
    #[error("coupling value {0} outside {{-1, 0, 1}}")]
    BadCoupling(f64),
    #[error("brute force capped at 24 spins, instance has {0}")]
    TooManySpins(usize),
    #[error("restart count must be >= 1")]
    NoRestarts,
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}
