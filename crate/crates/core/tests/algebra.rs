//! Construction oracles: brute-force enumerations and analytic spectra that
//! are independent of the builders under test.

use hamlab_core::algebra::{self, number_operator, FermionTerm, ModeOrdering, Spin};
use hamlab_core::{
    build_heisenberg, build_hubbard, build_pauli_lattice, jordan_wigner, lowest_eigs,
    FermionHamiltonian, LatticeGraph, PauliAxis, PauliString, SpinHamiltonian,
};
use num_complex::Complex64;

fn full_spectrum(op: &hamlab_core::SparseOperator) -> Vec<f64> {
    lowest_eigs(op, op.dim(), 1e-9).unwrap().eigenvalues
}

#[test]
fn single_xx_edge_spectrum() {
    let lattice = LatticeGraph::chain(2);
    let h = build_pauli_lattice(&lattice, &[((0, 1), PauliAxis::X, PauliAxis::X, 1.0)]).unwrap();
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    let expect = [-1.0, -1.0, 1.0, 1.0];
    for (e, x) in eigs.iter().zip(expect) {
        assert!((e - x).abs() < 1e-12, "{eigs:?}");
    }
}

#[test]
fn empty_coupling_list_is_zero_operator() {
    let lattice = LatticeGraph::full_2d(2, 2);
    let h = build_pauli_lattice(&lattice, &[]).unwrap();
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    assert!(eigs.iter().all(|e| e.abs() < 1e-14));
}

#[test]
fn coupling_on_non_edge_rejected_with_identity() {
    let lattice = LatticeGraph::full_2d(2, 2);
    let err =
        build_pauli_lattice(&lattice, &[((0, 3), PauliAxis::Z, PauliAxis::Z, 0.5)]).unwrap_err();
    match err {
        algebra::AlgebraError::CouplingOnNonEdge(0, 3) => {}
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn zz_plaquette_ground_energy_matches_bit_enumeration() {
    // Independent oracle: a ZZ-only Hamiltonian is classical, so its
    // spectrum is the 16 bit-pattern energies.
    let lattice = LatticeGraph::full_2d(2, 2);
    let couplings: Vec<_> = lattice
        .edges()
        .iter()
        .map(|&e| (e, PauliAxis::Z, PauliAxis::Z, 1.0))
        .collect();
    let h = build_pauli_lattice(&lattice, &couplings).unwrap();

    let mut enumerated: Vec<f64> = (0u32..16)
        .map(|bits| {
            lattice
                .edges()
                .iter()
                .map(|&(a, b)| {
                    let za = if bits >> a & 1 == 0 { 1.0 } else { -1.0 };
                    let zb = if bits >> b & 1 == 0 { 1.0 } else { -1.0 };
                    za * zb
                })
                .sum::<f64>()
        })
        .collect();
    enumerated.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let eigs = full_spectrum(&h.to_matrix().unwrap());
    assert!((eigs[0] - -4.0).abs() < 1e-12);
    for (e, x) in eigs.iter().zip(enumerated) {
        assert!((e - x).abs() < 1e-10);
    }
}

#[test]
fn two_qubit_heisenberg_singlet_triplet() {
    let lattice = LatticeGraph::chain(2);
    let h = build_heisenberg(&lattice, 1.0, &[[0.0; 3]; 2]).unwrap();
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    let expect = [-3.0, 1.0, 1.0, 1.0];
    for (e, x) in eigs.iter().zip(expect) {
        assert!((e - x).abs() < 1e-12, "{eigs:?}");
    }
}

#[test]
fn single_site_field_splits_by_2b() {
    let lattice = LatticeGraph::chain(1);
    let b = 0.37;
    let h = build_heisenberg(&lattice, 123.0, &[[0.0, 0.0, b]]).unwrap();
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    assert!((eigs[0] - -b).abs() < 1e-14);
    assert!((eigs[1] - b).abs() < 1e-14);
}

#[test]
fn heisenberg_plaquette_golden_ground_energy() {
    // 2x2 plaquette is the 4-cycle; dense diagonalization froze -8 exactly.
    let lattice = LatticeGraph::full_2d(2, 2);
    let h = build_heisenberg(&lattice, 1.0, &[[0.0; 3]; 4]).unwrap();
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    assert!((eigs[0] - -8.0).abs() < 1e-10, "ground {}", eigs[0]);
}

#[test]
fn single_site_hubbard_fock_spectrum() {
    let lattice = LatticeGraph::chain(1);
    let u = 3.21;
    let h = build_hubbard(&lattice, 0.7, u, &[[0.0; 3]]).unwrap();
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    let expect = [0.0, 0.0, 0.0, u];
    for (e, x) in eigs.iter().zip(expect) {
        assert!((e - x).abs() < 1e-12, "{eigs:?}");
    }
}

#[test]
fn single_site_one_electron_zeeman() {
    let lattice = LatticeGraph::chain(1);
    let b = 1.4;
    let h = build_hubbard(&lattice, 0.0, 0.0, &[[0.0, 0.0, b]])
        .unwrap()
        .with_sector(Some(1));
    let eigs = full_spectrum(&h.to_matrix().unwrap());
    assert!((eigs[0] - -b).abs() < 1e-12);
    assert!((eigs[1] - b).abs() < 1e-12);
}

#[test]
fn half_filled_dimer_ground_energy_analytic() {
    // Analytic diagonalization of the 4-dim S_z = 0 sector gives
    // E_0 = (U - sqrt(U^2 + 16 t^2)) / 2.
    let lattice = LatticeGraph::chain(2);
    for (t, u) in [(1.0, 4.0), (0.5, 8.0), (2.0, 1.0)] {
        let h = build_hubbard(&lattice, t, u, &[[0.0; 3]; 2])
            .unwrap()
            .with_sector(Some(2));
        let eigs = lowest_eigs(&h.to_matrix().unwrap(), 1, 1e-10).unwrap();
        let analytic = (u - (u * u + 16.0 * t * t).sqrt()) / 2.0;
        assert!(
            (eigs.eigenvalues[0] - analytic).abs() < 1e-10,
            "t={t} u={u}: {} vs {analytic}",
            eigs.eigenvalues[0]
        );
    }
}

#[test]
fn jordan_wigner_matches_fermionic_matrix_termwise() {
    // Operator identity for a handful of small Hamiltonians: the ladder
    // matrix build and the Pauli string build agree entrywise.
    let cases: Vec<FermionHamiltonian> = vec![
        FermionHamiltonian::new(
            3,
            vec![
                FermionTerm::hopping(0, 2, Complex64::new(0.7, 0.2)),
                FermionTerm::hopping(2, 0, Complex64::new(0.7, -0.2)),
            ],
            None,
        )
        .unwrap(),
        build_hubbard(
            &LatticeGraph::chain(2),
            1.0,
            4.0,
            &[[0.1, -0.4, 0.9], [0.0, 0.3, -0.2]],
        )
        .unwrap(),
    ];
    for h in cases {
        let ordering = ModeOrdering::custom((0..h.nmodes()).collect()).unwrap();
        let spin = jordan_wigner(&h, &ordering).unwrap();
        let mf = h.to_matrix().unwrap().to_dense();
        let ms = spin.to_matrix().unwrap().to_dense();
        let worst = (&mf - &ms).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "matrix mismatch {worst}");
    }
}

#[test]
fn jordan_wigner_preserves_hubbard_spectrum() {
    let lattice = LatticeGraph::full_2d(2, 2);
    let fields = [
        [0.11, -0.23, 0.31],
        [-0.41, 0.07, 0.19],
        [0.05, 0.13, -0.29],
        [-0.17, -0.02, 0.37],
    ];
    let h = build_hubbard(&lattice, 1.0, 4.0, &fields).unwrap();
    let spin = jordan_wigner(&h, &ModeOrdering::standard(4)).unwrap();
    let ef = full_spectrum(&h.to_matrix().unwrap());
    let es = full_spectrum(&spin.to_matrix().unwrap());
    for (a, b) in ef.iter().zip(es.iter()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn hubbard_commutes_with_particle_number() {
    let lattice = LatticeGraph::chain(3);
    let h = build_hubbard(&lattice, 0.8, 2.5, &[[0.2, 0.4, -0.6]; 3]).unwrap();
    let hm = h.to_matrix().unwrap().to_dense();
    let nm = number_operator(h.nmodes()).to_matrix().unwrap().to_dense();
    let comm = &hm * &nm - &nm * &hm;
    assert!(comm.iter().all(|v| v.norm() < 1e-12));
}

#[test]
fn su2_symmetry_without_fields() {
    // Total-spin generators commute with B-free Hubbard and Heisenberg.
    let lattice = LatticeGraph::chain(2);

    let heis = build_heisenberg(&lattice, 1.0, &[[0.0; 3]; 2]).unwrap();
    let hm = heis.to_matrix().unwrap().to_dense();
    for axis in PauliAxis::ALL {
        let total = SpinHamiltonian::new(
            2,
            (0..2)
                .map(|q| PauliString::single_qubit(q, axis, 1.0))
                .collect(),
        )
        .unwrap();
        let tm = total.to_matrix().unwrap().to_dense();
        let comm = &hm * &tm - &tm * &hm;
        assert!(comm.iter().all(|v| v.norm() < 1e-12));
    }

    let hub = build_hubbard(&lattice, 1.0, 4.0, &[[0.0; 3]; 2]).unwrap();
    let hm = hub.to_matrix().unwrap().to_dense();
    let ordering = ModeOrdering::standard(2);
    // sigma^z total = sum_i (n_up - n_dn); sigma^x, sigma^y built likewise.
    let sigma_total = |axis: PauliAxis| -> FermionHamiltonian {
        let mut terms = Vec::new();
        for site in 0..2 {
            let up = ordering.mode(site, Spin::Up);
            let dn = ordering.mode(site, Spin::Down);
            match axis {
                PauliAxis::X => {
                    terms.push(FermionTerm::hopping(up, dn, Complex64::ONE));
                    terms.push(FermionTerm::hopping(dn, up, Complex64::ONE));
                }
                PauliAxis::Y => {
                    terms.push(FermionTerm::hopping(up, dn, Complex64::new(0.0, -1.0)));
                    terms.push(FermionTerm::hopping(dn, up, Complex64::new(0.0, 1.0)));
                }
                PauliAxis::Z => {
                    terms.push(FermionTerm::hopping(up, up, Complex64::ONE));
                    terms.push(FermionTerm::hopping(dn, dn, -Complex64::ONE));
                }
            }
        }
        FermionHamiltonian::new(4, terms, None).unwrap()
    };
    for axis in PauliAxis::ALL {
        let tm = sigma_total(axis).to_matrix().unwrap().to_dense();
        let comm = &hm * &tm - &tm * &hm;
        let worst = comm.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "axis {axis:?}: {worst}");
    }
}

#[test]
fn ordering_size_mismatch_is_reported() {
    let h = build_hubbard(&LatticeGraph::chain(2), 1.0, 1.0, &[[0.0; 3]; 2]).unwrap();
    let err = jordan_wigner(&h, &ModeOrdering::standard(1)).unwrap_err();
    assert!(matches!(
        err,
        algebra::AlgebraError::OrderingSizeMismatch {
            ordering: 2,
            hamiltonian: 4
        }
    ));
}

#[test]
fn jordan_wigner_preserves_spectrum_at_ten_modes() {
    // The invariant's stated ceiling: a five-site Hubbard chain has ten
    // modes; fermionic and spin spectra agree to 1e-10 across all 1024
    // levels.
    let lattice = LatticeGraph::chain(5);
    let fields = [
        [0.11, -0.23, 0.31],
        [-0.41, 0.07, 0.19],
        [0.05, 0.13, -0.29],
        [-0.17, -0.02, 0.37],
        [0.21, 0.09, -0.12],
    ];
    let h = build_hubbard(&lattice, 0.9, 3.0, &fields).unwrap();
    assert_eq!(h.nmodes(), 10);
    let spin = jordan_wigner(&h, &ModeOrdering::standard(5)).unwrap();
    let ef = full_spectrum(&h.to_matrix().unwrap());
    let es = full_spectrum(&spin.to_matrix().unwrap());
    for (a, b) in ef.iter().zip(es.iter()) {
        assert!((a - b).abs() < 1e-10);
    }
}
