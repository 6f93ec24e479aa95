use hamlab_core::algebra::{build_heisenberg, build_hubbard, build_pauli_lattice};
use hamlab_core::eigensolve::{
    expectation, lowest_eigs, lowest_eigs_krylov, spectral_gap, EigenError, SparseOperator,
};
use hamlab_core::{LatticeGraph, PauliAxis, PauliString, SpinHamiltonian};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z_operator() -> SparseOperator {
    SpinHamiltonian::new(1, vec![PauliString::single_qubit(0, PauliAxis::Z, 1.0)])
        .unwrap()
        .to_matrix()
        .unwrap()
}

#[test]
fn single_qubit_z_spectrum() {
    let spec = lowest_eigs(&z_operator(), 2, 1e-12).unwrap();
    assert!((spec.eigenvalues[0] - -1.0).abs() < 1e-14);
    assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
    assert!(spec.residuals.iter().all(|&r| r <= 1e-12));
}

#[test]
fn heisenberg_pair_spectrum() {
    let h = build_heisenberg(&LatticeGraph::chain(2), 1.0, &[[0.0; 3]; 2]).unwrap();
    let spec = lowest_eigs(&h.to_matrix().unwrap(), 4, 1e-10).unwrap();
    let expect = [-3.0, 1.0, 1.0, 1.0];
    for (e, x) in spec.eigenvalues.iter().zip(expect) {
        assert!((e - x).abs() < 1e-12);
    }
}

/// Random 2-local Hamiltonian on a qubit ring, deterministic in the seed.
fn random_two_local(nqubits: usize, seed: u64) -> SpinHamiltonian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axis = |r: &mut ChaCha8Rng| PauliAxis::ALL[r.random_range(0..3)];
    let mut terms = Vec::new();
    for q in 0..nqubits {
        let p = (q + 1) % nqubits;
        terms.push(PauliString::two_qubit(
            q,
            axis(&mut rng),
            p,
            axis(&mut rng),
            rng.random::<f64>() - 0.5,
        ));
        terms.push(PauliString::single_qubit(
            q,
            axis(&mut rng),
            rng.random::<f64>() - 0.5,
        ));
    }
    SpinHamiltonian::new(nqubits, terms).unwrap()
}

#[test]
fn krylov_agrees_with_dense_on_ten_qubits() {
    let h = random_two_local(10, 7).to_matrix().unwrap();
    let dense = lowest_eigs(&h, 4, 1e-10).unwrap();
    let krylov = lowest_eigs_krylov(&h, 4, 1e-10, 99).unwrap();
    for (d, k) in dense.eigenvalues.iter().zip(krylov.eigenvalues.iter()) {
        assert!((d - k).abs() < 1e-9, "dense {d} vs krylov {k}");
    }
    assert!(krylov.residuals.iter().all(|&r| r <= 1e-10));
}

#[test]
fn krylov_resolves_degenerate_multiplets() {
    // B-free Heisenberg plaquette has a 3-fold degenerate triplet above the
    // ground state; the block iteration must report every copy.
    let h = build_heisenberg(&LatticeGraph::full_2d(2, 2), 1.0, &[[0.0; 3]; 4]).unwrap();
    let op = h.to_matrix().unwrap();
    let dense = lowest_eigs(&op, 6, 1e-10).unwrap();
    let krylov = lowest_eigs_krylov(&op, 6, 1e-10, 3).unwrap();
    for (d, k) in dense.eigenvalues.iter().zip(krylov.eigenvalues.iter()) {
        assert!((d - k).abs() < 1e-9);
    }
}

#[test]
fn eigenvalues_invariant_under_relabeling() {
    let h = random_two_local(6, 21);
    let perm = vec![3, 5, 0, 2, 4, 1];
    let relabeled = h.relabel(&perm).unwrap();
    let a = lowest_eigs(&h.to_matrix().unwrap(), 8, 1e-10).unwrap();
    let b = lowest_eigs(&relabeled.to_matrix().unwrap(), 8, 1e-10).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(b.eigenvalues.iter()) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn expectation_contracts() {
    let id = SpinHamiltonian::new(1, vec![PauliString::identity(1.0)])
        .unwrap()
        .to_matrix()
        .unwrap();
    let state = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    assert!((expectation(&id, &state).unwrap() - 1.0).abs() < 1e-14);

    // Z on |0>.
    let zero = [Complex64::ONE, Complex64::ZERO];
    assert!((expectation(&z_operator(), &zero).unwrap() - 1.0).abs() < 1e-14);

    // Ground vector of a random operator reproduces its eigenvalue.
    let h = random_two_local(8, 5).to_matrix().unwrap();
    let spec = lowest_eigs(&h, 1, 1e-10).unwrap();
    let v = &spec.vectors.as_ref().unwrap()[0];
    let val = expectation(&h, v).unwrap();
    assert!((val - spec.eigenvalues[0]).abs() < 1e-9);

    // Unnormalized states are rejected.
    let bad = [Complex64::new(2.0, 0.0), Complex64::ZERO];
    assert!(matches!(
        expectation(&z_operator(), &bad),
        Err(EigenError::NotNormalized(_))
    ));
}

#[test]
fn gap_of_z_and_identity() {
    assert!((spectral_gap(&z_operator()).unwrap() - 2.0).abs() < 1e-12);

    let id = SpinHamiltonian::new(1, vec![PauliString::identity(1.0)])
        .unwrap()
        .to_matrix()
        .unwrap();
    assert_eq!(spectral_gap(&id).unwrap(), 0.0);
}

#[test]
fn dimer_gap_is_singlet_triplet() {
    let (t, u) = (1.0, 8.0);
    let h = build_hubbard(&LatticeGraph::chain(2), t, u, &[[0.0; 3]; 2])
        .unwrap()
        .with_sector(Some(2));
    let gap = spectral_gap(&h.to_matrix().unwrap()).unwrap();
    let analytic = ((u * u + 16.0 * t * t).sqrt() - u) / 2.0;
    assert!((gap - analytic).abs() < 1e-10, "{gap} vs {analytic}");
}

#[test]
fn residual_contract_holds() {
    let h = random_two_local(9, 13).to_matrix().unwrap();
    let tol = 1e-9;
    let spec = lowest_eigs(&h, 6, tol).unwrap();
    assert!(spec.residuals.iter().all(|&r| r <= tol));
    let vs = spec.vectors.as_ref().unwrap();
    // Orthonormality of returned vectors.
    for i in 0..vs.len() {
        for j in 0..=i {
            let dot: Complex64 = vs[i]
                .iter()
                .zip(vs[j].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((dot.norm() - expect).abs() < 1e-8);
        }
    }
}

#[test]
fn zero_operator_spectrum() {
    let h = build_pauli_lattice(&LatticeGraph::full_2d(2, 2), &[]).unwrap();
    let spec = lowest_eigs(&h.to_matrix().unwrap(), 4, 1e-12).unwrap();
    assert!(spec.eigenvalues.iter().all(|e| e.abs() < 1e-14));
}

#[test]
fn spectrum_csv_shape() {
    let spec = lowest_eigs(&z_operator(), 2, 1e-12).unwrap();
    let csv = spec.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue,residual"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn davidson_agrees_with_dense() {
    let h = random_two_local(10, 31).to_matrix().unwrap();
    let dense = lowest_eigs(&h, 4, 1e-10).unwrap();
    let davidson = hamlab_core::eigensolve::lowest_eigs_davidson(&h, 4, 1e-10, 5).unwrap();
    for (d, k) in dense.eigenvalues.iter().zip(davidson.eigenvalues.iter()) {
        assert!((d - k).abs() < 1e-9, "dense {d} vs davidson {k}");
    }
    assert!(davidson.residuals.iter().all(|&r| r <= 1e-10));
}

#[test]
fn axis_rotation_preserves_spectra() {
    use hamlab_core::algebra::rotation_to_z;
    let h = random_two_local(6, 17);
    // Rotations aligning arbitrary directions with z.
    let dirs = [
        [0.3, -0.7, 0.2],
        [0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [-0.2, 0.4, 0.9],
        [0.6, 0.6, -0.1],
    ];
    let rotations: Vec<[[f64; 3]; 3]> = dirs.iter().map(|d| rotation_to_z(*d)).collect();
    let rotated = h.rotate_axes(&rotations).unwrap();
    let a = lowest_eigs(&h.to_matrix().unwrap(), 8, 1e-10).unwrap();
    let b = lowest_eigs(&rotated.to_matrix().unwrap(), 8, 1e-10).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(b.eigenvalues.iter()) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
    // The rotation actually aligns: a field B.sigma maps to |B| Z.
    let field = SpinHamiltonian::new(
        1,
        vec![
            PauliString::single_qubit(0, PauliAxis::X, 0.3),
            PauliString::single_qubit(0, PauliAxis::Y, -0.4),
            PauliString::single_qubit(0, PauliAxis::Z, 1.2),
        ],
    )
    .unwrap();
    let norm = (0.3f64 * 0.3 + 0.4 * 0.4 + 1.2 * 1.2).sqrt();
    let aligned = field
        .rotate_axes(&[rotation_to_z([0.3, -0.4, 1.2])])
        .unwrap();
    assert_eq!(aligned.terms().len(), 1);
    assert_eq!(aligned.terms()[0].factors()[0].1, PauliAxis::Z);
    assert!((aligned.terms()[0].coefficient() - norm).abs() < 1e-12);
}
