//! Hartree-Fock oracles: Fock-space expectation values of explicitly
//! constructed determinants, variational bounds against exact
//! diagonalization, and the Ising embedding end to end.

use hamlab_core::algebra::{FermionHamiltonian, FermionOp, FermionTerm};
use hamlab_core::eigensolve::lowest_eigs;
use hamlab_core::hf::{
    decode_spins, default_lambda, embed_ising, hf_energy, hf_optimize, ising_bruteforce, FourIndex,
    HfState, IsingInstance,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(m: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Random Hermitian-consistent quartic table plus its term list.
fn random_h2(m: usize, pairs: usize, rng: &mut ChaCha8Rng) -> FourIndex {
    let mut h2 = FourIndex::new();
    for _ in 0..pairs {
        let (i, j, k, l) = (
            rng.random_range(0..m),
            rng.random_range(0..m),
            rng.random_range(0..m),
            rng.random_range(0..m),
        );
        if i == j || k == l {
            continue;
        }
        let c = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        h2.push(i, j, k, l, c);
        // Hermitian partner: (a+_i a+_j a_k a_l)^+ = a+_l a+_k a_j a_i.
        h2.push(l, k, j, i, c.conj());
    }
    h2
}

/// The same (H1, H2) as a fermionic operator for the matrix oracle.
fn to_fermion(m: usize, h1: &DMatrix<Complex64>, h2: &FourIndex) -> FermionHamiltonian {
    let mut terms = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if h1[(i, j)].norm_sqr() > 0.0 {
                terms.push(FermionTerm::hopping(i, j, h1[(i, j)]));
            }
        }
    }
    for &(i, j, k, l, c) in h2.entries() {
        terms.push(FermionTerm::new(
            vec![
                FermionOp::dag(i),
                FermionOp::dag(j),
                FermionOp::ann(k),
                FermionOp::ann(l),
            ],
            c,
        ));
    }
    FermionHamiltonian::new(m, terms, None).expect("paired terms are Hermitian")
}

/// Build the determinant vector `b+_N ... b+_1 |0>` in Fock space.
fn determinant_vector(u: &DMatrix<Complex64>) -> Vec<Complex64> {
    let (n, m) = (u.nrows(), u.ncols());
    let dim = 1usize << m;
    let mut state = vec![Complex64::ZERO; dim];
    state[0] = Complex64::ONE;
    for row in (0..n).rev() {
        let mut next = vec![Complex64::ZERO; dim];
        for (mask, &amp) in state.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            for mode in 0..m {
                let coeff = u[(row, mode)].conj();
                if coeff.norm_sqr() == 0.0 {
                    continue;
                }
                let bit = 1usize << mode;
                if mask & bit != 0 {
                    continue;
                }
                let below = (mask & (bit - 1)).count_ones();
                let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                next[mask | bit] += amp * coeff * sign;
            }
        }
        state = next;
    }
    let norm = state.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    state.iter_mut().for_each(|x| *x /= norm);
    state
}

#[test]
fn wick_matches_fock_space_expectation() {
    // 20 random (H1, H2, P) instances on up to 6 modes.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..20 {
        let m = 3 + case % 4;
        let n = 1 + case % m.min(3);
        let h1 = random_hermitian(m, &mut rng);
        let h2 = random_h2(m, 4, &mut rng);

        let raw = DMatrix::from_fn(n, m, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let qr = raw.adjoint().qr();
        let q = qr.q();
        let u = q.adjoint(); // orthonormal rows
        let state = HfState::from_orbitals(&u.clone_owned()).unwrap();
        let wick = hf_energy(&h1, &h2, &state).unwrap();

        let vector = determinant_vector(&u.clone_owned());
        let op = to_fermion(m, &h1, &h2).to_matrix().unwrap();
        let fock = hamlab_core::eigensolve::expectation(&op, &vector).unwrap();

        assert!(
            (wick - fock).abs() < 1e-10,
            "case {case}: wick {wick} vs fock {fock}"
        );
    }
}

#[test]
fn variational_bound_holds_on_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..6 {
        let m = 4 + 2 * (case % 3); // 4, 6, 8 modes
        let n = m / 2;
        let h1 = random_hermitian(m, &mut rng);
        let h2 = random_h2(m, 5, &mut rng);
        let res = hf_optimize(&h1, &h2, n, 8, 100 + case as u64).unwrap();

        let exact = {
            let h = to_fermion(m, &h1, &h2).with_sector(Some(n));
            lowest_eigs(&h.to_matrix().unwrap(), 1, 1e-10)
                .unwrap()
                .eigenvalues[0]
        };
        assert!(
            res.best_energy >= exact - 1e-9,
            "case {case}: HF {} below exact {exact}",
            res.best_energy
        );
    }
}

#[test]
fn embedded_instances_reach_bruteforce_minimum() {
    // Quick five-instance version of the acceptance sweep.
    let mut hits = 0;
    for seed in 0..5u64 {
        let inst = IsingInstance::random(2, 500 + seed);
        let emb = embed_ising(&inst, default_lambda(inst.spins())).unwrap();
        let (e_min, _) = ising_bruteforce(&inst).unwrap();
        let res = hf_optimize(&emb.h1, &emb.h2, emb.electrons, 32, seed).unwrap();
        if (res.best_energy - e_min).abs() <= 1e-8 * e_min.abs().max(1.0) {
            hits += 1;
            // A converged run decodes to a configuration achieving the
            // brute-force minimum energy.
            let decoded = decode_spins(&res.best_state, &inst).unwrap();
            assert!(decoded.ambiguous.is_empty());
            assert!((inst.energy(&decoded.spins) - e_min).abs() < 1e-9);
        }
    }
    assert!(hits >= 4, "only {hits}/5 instances reached the minimum");
}

#[test]
fn embedding_dominance_warning() {
    let inst = IsingInstance::random(2, 3);
    let weak = embed_ising(&inst, 1.0).unwrap();
    assert!(!weak.dominance_ok);
    let strong = embed_ising(&inst, default_lambda(inst.spins())).unwrap();
    assert!(strong.dominance_ok);
}

#[test]
fn decode_patterns() {
    let inst = IsingInstance::random(2, 77);
    let n = inst.spins();
    // P = diag(1,0,1,0,...) decodes to all spins up.
    let up = HfState::from_occupation(2 * n, &(0..n).map(|i| 2 * i).collect::<Vec<_>>());
    let d = decode_spins(&up, &inst).unwrap();
    assert!(d.spins.iter().all(|&s| s == 1));
    // P = diag(0,1,0,1,...) decodes to all spins down.
    let dn = HfState::from_occupation(2 * n, &(0..n).map(|i| 2 * i + 1).collect::<Vec<_>>());
    let d = decode_spins(&dn, &inst).unwrap();
    assert!(d.spins.iter().all(|&s| s == -1));
}
