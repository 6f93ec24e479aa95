use hamlab_core::algebra::{PauliString, SpinHamiltonian};
use hamlab_core::gadgets::{effective_operator_from_exact, fit_pauli_basis};
use hamlab_core::PauliAxis;
use nalgebra::Vector2;
use num_complex::Complex64;

fn main() {
    let r = 50.0f64;
    let l_xx = 1.0;
    let b_xx = r * l_xx;
    let l_h = r / 2.0 * l_xx;
    let b_h = r * l_h;

    let mut terms: Vec<PauliString> = Vec::new();
    let push_field = |terms: &mut Vec<PauliString>, q: usize, axis: PauliAxis, b: f64| {
        terms.push(PauliString::identity(b / 2.0));
        terms.push(PauliString::single_qubit(q, axis, -b / 2.0));
    };
    push_field(&mut terms, 2, PauliAxis::Y, b_xx);
    terms.push(PauliString::single_qubit(0, PauliAxis::Y, l_xx));
    terms.push(PauliString::single_qubit(4, PauliAxis::Y, l_xx));
    for (left, med, right) in [(0usize, 1usize, 2usize), (2, 3, 4)] {
        for axis in PauliAxis::ALL {
            terms.push(PauliString::two_qubit(left, axis, med, axis, l_h));
            terms.push(PauliString::two_qubit(med, axis, right, axis, l_h));
        }
        push_field(&mut terms, med, PauliAxis::Z, b_h);
        let comp = -(l_h + 2.0 * l_h * l_h / b_h);
        terms.push(PauliString::single_qubit(left, PauliAxis::Z, comp));
        terms.push(PauliString::single_qubit(right, PauliAxis::Z, comp));
    }
    let h = SpinHamiltonian::new(5, terms).unwrap();
    let op = h.to_matrix().unwrap();

    // Mediators 1 and 3 ground = |0> (field along Z); contract outer (0,2,4).
    let g = Vector2::new(Complex64::ONE, Complex64::ZERO);
    let (m_eff, _) =
        effective_operator_from_exact(&op, 5, &[(1, g.clone()), (3, g)], &[0, 2, 4]).unwrap();
    let fit = fit_pauli_basis(&m_eff, 3);
    let mut coeffs: Vec<_> = fit
        .coefficients
        .iter()
        .filter(|(f, c)| c.abs() > 1e-3 && f.iter().any(|x| x.is_some()))
        .collect();
    coeffs.sort_by(|a, b| b.1.abs().partial_cmp(&a.1.abs()).unwrap());
    for (f, c) in coeffs.iter().take(14) {
        let label: String = f
            .iter()
            .map(|x| match x {
                None => '1',
                Some(a) => a.label(),
            })
            .collect();
        println!("{label}: {c:+.5}");
    }
    println!(
        "expected XX on outer pair (X1X): {:+.5}",
        -2.0 * l_xx * l_xx / b_xx
    );
}
