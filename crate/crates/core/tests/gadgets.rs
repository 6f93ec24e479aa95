//! Gadget oracles: exact diagonalization of every compiled gadget against
//! its printed effective coupling, plus the scaling laws the second-order
//! construction forces.

use hamlab_core::gadgets::{
    compile_erasure, compile_full_chain_analytic, compile_ising_to_xx, compile_ising_to_xx_axes,
    compile_pauli_to_ising, compile_pauli_tune, compile_xx_to_heisenberg,
    hubbard_effective_exchange, verify_erasure, verify_gadget, verify_gadget_pair, GadgetError,
    StrengthSchedule,
};
use hamlab_core::sw::{deviation_scan, BlockSplit};
use hamlab_core::{lowest_eigs, LatticeGraph, PauliAxis};
use std::collections::BTreeSet;

/// Least-squares slope of log(y) against log(x).
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn pauli_tune_angle_endpoints() {
    let zero = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.0, 1.0, 100.0).unwrap();
    assert_eq!(zero.phi, 0.0);
    assert_eq!(zero.predicted[0].strength, 0.0);

    let maximal = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.01, 1.0, 100.0).unwrap();
    assert!((maximal.phi - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert!((maximal.predicted[0].strength - 0.01).abs() < 1e-14);

    let err = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.02, 1.0, 100.0).unwrap_err();
    match err {
        GadgetError::InfeasibleTarget { max, .. } => assert!((max - 0.01).abs() < 1e-14),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn pauli_tune_measured_coupling() {
    // lambda_P = 1, B_P = 100, target 0.005: the YZ coupling measured from
    // the 8-dim exact spectrum lands within 2e-4.
    let spec = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.005, 1.0, 100.0).unwrap();
    let v = verify_gadget(&spec).unwrap();
    assert!(
        (v.measured[0].strength - 0.005).abs() < 2e-4,
        "measured {}",
        v.measured[0].strength
    );
}

#[test]
fn pauli_tune_effective_hamiltonian_matches_formula() {
    // 3-qubit YZ gadget at lambda = 1, B = 100: H_eff reproduces
    // 2 l^2/B sin(phi) cos(phi) Y(x)Z up to O(l^3/B^2).
    let (lambda, b) = (1.0, 100.0);
    let spec = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.007, lambda, b).unwrap();
    let v = verify_gadget(&spec).unwrap();
    let formula = 2.0 * lambda * lambda / b * spec.phi.sin() * spec.phi.cos();
    // The fit of H_eff itself (not the exact spectrum): extract from the
    // SW matrix on the low space in the same Pauli basis.
    let fit = hamlab_core::gadgets::fit_two_qubit(&v.report.h_eff);
    let c = fit.coefficient(&[Some(PauliAxis::Y), Some(PauliAxis::Z)]);
    assert!(
        (c - formula).abs() < 1e-12,
        "H_eff coefficient {c} vs formula {formula}"
    );
    assert!(v.report.measured_deviation < lambda.powi(3) / (b * b) * 20.0);
}

#[test]
fn pauli_to_ising_strength() {
    let spec = compile_pauli_to_ising(PauliAxis::X, PauliAxis::Y, 1.0, 200.0).unwrap();
    assert!((spec.predicted[0].strength - 0.005).abs() < 1e-15);
    let v = verify_gadget(&spec).unwrap();
    assert!(
        (v.measured[0].strength - 1.0 / 200.0).abs() < 1e-4,
        "measured {}",
        v.measured[0].strength
    );

    // lambda = 0 decouples.
    let spec0 = compile_pauli_to_ising(PauliAxis::X, PauliAxis::Y, 0.0, 200.0).unwrap();
    let v0 = verify_gadget(&spec0).unwrap();
    assert!(v0.measured[0].strength.abs() < 1e-12);

    assert!(matches!(
        compile_pauli_to_ising(PauliAxis::X, PauliAxis::X, 1.0, 200.0),
        Err(GadgetError::SameAxis)
    ));
}

#[test]
fn pauli_to_ising_rotational_invariance() {
    // Cyclic permutation X->Y->Z->X: the construction is covariant, so the
    // effective strength is identical.
    let base = compile_pauli_to_ising(PauliAxis::X, PauliAxis::Y, 1.0, 200.0).unwrap();
    let rotated = compile_pauli_to_ising(PauliAxis::Y, PauliAxis::Z, 1.0, 200.0).unwrap();
    let vb = verify_gadget(&base).unwrap();
    let vr = verify_gadget(&rotated).unwrap();
    assert!(
        (vb.measured[0].strength - vr.measured[0].strength).abs() < 1e-12,
        "{} vs {}",
        vb.measured[0].strength,
        vr.measured[0].strength
    );
}

#[test]
fn ising_to_xx_strength_and_symmetry() {
    let spec = compile_ising_to_xx(1.0, 200.0).unwrap();
    assert!((spec.predicted[0].strength - -0.01).abs() < 1e-15);
    let v = verify_gadget(&spec).unwrap();
    assert!(
        (v.measured[0].strength - -0.01).abs() < 1e-4,
        "measured {}",
        v.measured[0].strength
    );

    // Flipping the mediator field to the other T eigenstate keeps |coupling|.
    let flipped = {
        let mut s = spec.clone();
        s.b_field = 200.0;
        // Equivalent flip: exchange the roles by rotating S -> S, T -> -T is
        // realized with the opposite field axis pair ordering.
        s
    };
    let spec_flip = compile_ising_to_xx_axes(PauliAxis::X, PauliAxis::Y, 1.0, 200.0).unwrap();
    let vf = verify_gadget(&spec_flip).unwrap();
    assert!((vf.measured[0].strength.abs() - v.measured[0].strength.abs()).abs() < 1e-12);
    drop(flipped);

    // lambda = 0: four degenerate low levels.
    let spec0 = compile_ising_to_xx(0.0, 200.0).unwrap();
    let h = spec0.hamiltonian().unwrap().to_matrix().unwrap();
    let eigs = lowest_eigs(&h, 4, 1e-11).unwrap().eigenvalues;
    assert!(eigs[3] - eigs[0] < 1e-10);
}

#[test]
fn xx_to_heisenberg_strength_and_compensation() {
    let (lambda, b) = (1.0, 200.0);
    let spec = compile_xx_to_heisenberg(lambda, b).unwrap();
    let v = verify_gadget(&spec).unwrap();
    // The hop-back channel of the full Heisenberg coupling carries a genuine
    // ~4 lambda/B relative third-order term, so the measurement is held to
    // the 10 lambda/B envelope rather than the tighter absolute tolerance
    // the cleaner kinds meet.
    for m in &v.measured {
        let rel = (m.strength - -0.01).abs() / 0.01;
        assert!(
            rel < 10.0 * lambda / b,
            "measured {:?} = {} (rel {rel})",
            m.axes,
            m.strength
        );
    }
    // Compensated gadget: no leftover Z field on the outer qubits.
    let z_left = v.fit.coefficient(&[Some(PauliAxis::Z), None]);
    assert!(z_left.abs() < 1e-4, "residual Z {z_left}");

    // Omitting the second-order compensation exposes the spurious local
    // field of scale lambda^2/B the hop-back process induces (the measured
    // magnitude is 2 lambda^2/B).
    let field = spec.field_hamiltonian().unwrap();
    let bare = spec
        .coupling_hamiltonian_without_second_order_compensation()
        .unwrap();
    let total = field.add(&bare).unwrap().to_matrix().unwrap();
    let ground = spec.mediator_ground();
    let (m_eff, _) =
        hamlab_core::gadgets::effective_operator_from_exact(&total, 3, &[(1, ground)], &[0, 2])
            .unwrap();
    let fit = hamlab_core::gadgets::fit_two_qubit(&m_eff);
    let spurious = fit.coefficient(&[Some(PauliAxis::Z), None]);
    let scale = lambda * lambda / b;
    assert!(
        spurious.abs() > 1.0 * scale && spurious.abs() < 3.0 * scale,
        "spurious Z {spurious} vs scale {scale}"
    );
}

#[test]
fn every_kind_deviation_envelope() {
    // At lambda = 1, B = 1000 the second-order deviation sits at or below
    // 2e-5 for the single-channel kinds; the full Heisenberg coupling has a
    // larger third-order constant (~32 lambda^3/B^2 measured) and gets the
    // correspondingly wider envelope. At lambda = 0 everything is exact.
    let b = 1e3;
    let specs = vec![
        (
            compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.0005, 1.0, b).unwrap(),
            2e-5,
        ),
        (
            compile_pauli_to_ising(PauliAxis::X, PauliAxis::Y, 1.0, b).unwrap(),
            2e-5,
        ),
        (compile_ising_to_xx(1.0, b).unwrap(), 2e-5),
        (compile_xx_to_heisenberg(1.0, b).unwrap(), 4e-5),
    ];
    for (spec, envelope) in &specs {
        let v = verify_gadget(spec).unwrap();
        assert!(
            v.report.measured_deviation <= *envelope,
            "{:?}: deviation {}",
            spec.kind,
            v.report.measured_deviation
        );
        assert!(v.in_regime);
    }

    let zero = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.0, 0.0, b).unwrap();
    let v = verify_gadget(&zero).unwrap();
    assert!(v.report.measured_deviation <= 1e-12);
}

#[test]
fn sw_deviation_scan_slope_is_minus_two() {
    // Fixed lambda = 1, B in {1e2, 1e3, 1e4}, phi held constant by scaling
    // the target with 1/B.
    let scan = deviation_scan(
        |b| {
            let spec = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.3 / b, 1.0, b).unwrap();
            let h = spec.field_hamiltonian().unwrap().to_matrix().unwrap();
            let v = spec.coupling_hamiltonian().unwrap().to_matrix().unwrap();
            let split = BlockSplit::from_energy_cut(&h, &v, b / 2.0)?;
            hamlab_core::sw::effective_hamiltonian_2nd(&h, &v, &split)
        },
        &[1e2, 1e3, 1e4],
    )
    .unwrap();
    let slope = loglog_slope(&scan);
    assert!((slope - -2.0).abs() < 0.15, "slope {slope} from {scan:?}");
}

#[test]
fn xx_to_heisenberg_scan_slope_is_minus_two() {
    let scan = deviation_scan(
        |b| {
            let spec = compile_xx_to_heisenberg(1.0, b).unwrap();
            let h = spec.field_hamiltonian().unwrap().to_matrix().unwrap();
            let v = spec.coupling_hamiltonian().unwrap().to_matrix().unwrap();
            let split = BlockSplit::from_energy_cut(&h, &v, b / 2.0)?;
            hamlab_core::sw::effective_hamiltonian_2nd(&h, &v, &split)
        },
        &[1e2, 1e3, 1e4],
    )
    .unwrap();
    let slope = loglog_slope(&scan);
    assert!((slope - -2.0).abs() < 0.15, "slope {slope}");
}

#[test]
fn symmetric_gadgets_decay_at_least_second_order() {
    // The pi/4 Ising gadget and the XX gadget have symmetries that cancel
    // the generic third-order eigenvalue shift, so their deviations fall
    // off one power faster (slope -3) than the bound requires. Assert the
    // bound direction.
    let families: [&dyn Fn(f64) -> hamlab_core::gadgets::GadgetSpec; 2] = [
        &|b| compile_pauli_to_ising(PauliAxis::X, PauliAxis::Y, 1.0, b).unwrap(),
        &|b| compile_ising_to_xx(1.0, b).unwrap(),
    ];
    for family in families {
        let scan = deviation_scan(
            |b| {
                let spec = family(b);
                let h = spec.field_hamiltonian().unwrap().to_matrix().unwrap();
                let v = spec.coupling_hamiltonian().unwrap().to_matrix().unwrap();
                let split = BlockSplit::from_energy_cut(&h, &v, b / 2.0)?;
                hamlab_core::sw::effective_hamiltonian_2nd(&h, &v, &split)
            },
            &[1e2, 1e3, 1e4],
        )
        .unwrap();
        let slope = loglog_slope(&scan);
        assert!(slope < -1.85, "slope {slope}");
    }
}

#[test]
fn zero_lambda_family_has_zero_deviation() {
    let scan = deviation_scan(
        |b| {
            let spec = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.0, 0.0, b).unwrap();
            let h = spec.field_hamiltonian().unwrap().to_matrix().unwrap();
            let v = spec.coupling_hamiltonian().unwrap().to_matrix().unwrap();
            let split = BlockSplit::from_energy_cut(&h, &v, b / 2.0)?;
            hamlab_core::sw::effective_hamiltonian_2nd(&h, &v, &split)
        },
        &[1e2, 1e3, 1e4],
    )
    .unwrap();
    // Pure rounding noise, which scales with the absolute field energy.
    assert!(scan.iter().all(|&(b, d)| d < 4e-16 * b + 1e-13), "{scan:?}");
}

#[test]
fn adjacent_gadgets_do_not_cross_talk() {
    let (lambda, b) = (1.0, 1e3);
    let left = compile_pauli_tune(PauliAxis::Y, PauliAxis::Z, 0.0005, lambda, b).unwrap();
    let right = compile_pauli_tune(PauliAxis::X, PauliAxis::Y, 0.0005, lambda, b).unwrap();
    let report = verify_gadget_pair(&left, &right).unwrap();
    let envelope = 10.0 * lambda.powi(3) / (b * b);
    assert!(
        report.cross_coupling <= envelope,
        "cross coupling {} above {envelope}",
        report.cross_coupling
    );
    // Each gadget still delivers its own coupling inside the pair.
    assert!((report.left_measured[0].strength - 0.0005).abs() < 2e-5);
    assert!((report.right_measured[0].strength - 0.0005).abs() < 2e-5);
}

#[test]
fn erasure_scan_slope_is_minus_one() {
    let lattice = LatticeGraph::chain(3);
    let keep: BTreeSet<usize> = [0, 2].into_iter().collect();
    let points: Vec<(f64, f64)> = [1e2, 1e3, 1e4]
        .iter()
        .map(|&b_e| {
            let v = verify_erasure(&lattice, &keep, 1.0, b_e, 4).unwrap();
            (b_e, v.deviation)
        })
        .collect();
    let slope = loglog_slope(&points);
    assert!((slope - -1.0).abs() < 0.1, "slope {slope} from {points:?}");
}

#[test]
fn erasure_compensation_is_exact_to_first_order() {
    // Erasing one end of a 2-chain leaves a compensated free qubit: the low
    // levels are degenerate to O(V^2/B_e).
    let lattice = LatticeGraph::chain(2);
    let keep: BTreeSet<usize> = [0].into_iter().collect();
    let v = verify_erasure(&lattice, &keep, 1.0, 1e5, 2).unwrap();
    assert!(v.deviation < 1e-3, "{:?}", v);
}

#[test]
fn hubbard_exchange_report() {
    let r = hubbard_effective_exchange(1.0, 100.0).unwrap();
    // (sqrt(10016) - 100)/2 = 0.0399840128...
    assert!((r.exact_gap - r.analytic_gap).abs() < 1e-10);
    assert!((r.exact_gap - 0.0399840128).abs() < 1e-9);
    assert!((r.predicted_gap - 0.04).abs() < 1e-15);
    assert!(r.relative_error < 4.1e-4);

    let r0 = hubbard_effective_exchange(0.0, 100.0).unwrap();
    assert_eq!(r0.j_sigma, 0.0);
    assert!(r0.exact_gap.abs() < 1e-12);
}

#[test]
fn hubbard_gap_scales_inversely_with_u() {
    let points: Vec<(f64, f64)> = [1e2, 1e3, 1e4]
        .iter()
        .map(|&u| {
            let r = hubbard_effective_exchange(1.0, u).unwrap();
            (u, r.exact_gap)
        })
        .collect();
    let slope = loglog_slope(&points);
    assert!((slope - -1.0).abs() < 0.02, "slope {slope}");
}

#[test]
fn chain_compiles_for_every_axis_pair() {
    let schedule = StrengthSchedule::geometric(20.0, 1.0).unwrap();
    for a in PauliAxis::ALL {
        for b in PauliAxis::ALL {
            let chain = compile_full_chain_analytic(a, b, 0.01, &schedule).unwrap();
            assert_eq!(chain.n_qubits(), 17);
        }
    }
}

#[test]
fn erase_everything_is_trivial_ground() {
    let lattice = LatticeGraph::full_2d(2, 2);
    let keep = BTreeSet::new();
    let gadget = compile_erasure(&lattice, &keep, 1.0, 100.0).unwrap();
    let op = gadget.fields.to_matrix().unwrap();
    let spec = lowest_eigs(&op, 1, 1e-10).unwrap();
    assert!(spec.eigenvalues[0].abs() < 1e-12);
}
