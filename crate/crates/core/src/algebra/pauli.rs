use super::AlgebraError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Single-qubit Pauli axis. Identity factors are never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// Unit field vector along this axis.
    pub fn unit(self) -> [f64; 3] {
        match self {
            PauliAxis::X => [1.0, 0.0, 0.0],
            PauliAxis::Y => [0.0, 1.0, 0.0],
            PauliAxis::Z => [0.0, 0.0, 1.0],
        }
    }

    /// The axis orthogonal to both arguments; `None` if they coincide.
    pub fn third(a: PauliAxis, b: PauliAxis) -> Option<PauliAxis> {
        if a == b {
            return None;
        }
        Some(
            *PauliAxis::ALL
                .iter()
                .find(|&&c| c != a && c != b)
                .expect("two distinct axes leave one remaining"),
        )
    }

    pub fn label(self) -> char {
        match self {
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    pub fn from_label(c: char) -> Option<Self> {
        match c {
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }
}

/// Single-qubit products: `a * b = phase * axis` (axis `None` = identity).
fn axis_product(a: PauliAxis, b: PauliAxis) -> (Option<PauliAxis>, Complex64) {
    use PauliAxis::*;
    if a == b {
        return (None, Complex64::ONE);
    }
    let (axis, sign) = match (a, b) {
        (X, Y) => (Z, 1.0),
        (Y, X) => (Z, -1.0),
        (Y, Z) => (X, 1.0),
        (Z, Y) => (X, -1.0),
        (Z, X) => (Y, 1.0),
        (X, Z) => (Y, -1.0),
        _ => unreachable!(),
    };
    (Some(axis), Complex64::new(0.0, sign))
}

/// Multiply two factor maps (each sorted by qubit), returning the product
/// map and the accumulated phase. Used by the Jordan-Wigner expansion.
pub(super) fn multiply_factor_maps(
    left: &[(usize, PauliAxis)],
    right: &[(usize, PauliAxis)],
) -> (Vec<(usize, PauliAxis)>, Complex64) {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut phase = Complex64::ONE;
    let (mut i, mut j) = (0, 0);
    while i < left.len() || j < right.len() {
        if j >= right.len() || (i < left.len() && left[i].0 < right[j].0) {
            out.push(left[i]);
            i += 1;
        } else if i >= left.len() || right[j].0 < left[i].0 {
            out.push(right[j]);
            j += 1;
        } else {
            let (axis, p) = axis_product(left[i].1, right[j].1);
            phase *= p;
            if let Some(axis) = axis {
                out.push((left[i].0, axis));
            }
            i += 1;
            j += 1;
        }
    }
    (out, phase)
}

/// SO(3) matrix (Rodrigues form) sending the direction of `v` to `+z`;
/// identity for `v = 0`. Used to align strong local fields with the
/// computational axis before iterative diagonalization.
pub fn rotation_to_z(v: [f64; 3]) -> [[f64; 3]; 3] {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let eye = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    if norm == 0.0 {
        return eye;
    }
    let b = [v[0] / norm, v[1] / norm, v[2] / norm];
    // axis = b x z = (b_y, -b_x, 0), angle = acos(b_z)
    let (ax, ay) = (b[1], -b[0]);
    let s = (ax * ax + ay * ay).sqrt();
    if s < 1e-14 {
        if b[2] > 0.0 {
            return eye;
        }
        // Antiparallel: pi rotation about x.
        return [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    }
    let (ux, uy) = (ax / s, ay / s);
    let cos = b[2];
    let sin = s;
    let one_c = 1.0 - cos;
    // Rodrigues with u_z = 0.
    [
        [cos + ux * ux * one_c, ux * uy * one_c, uy * sin],
        [ux * uy * one_c, cos + uy * uy * one_c, -ux * sin],
        [-uy * sin, ux * sin, cos],
    ]
}

/// A weighted Pauli string: a real coefficient times a tensor product of
/// Pauli factors on distinct qubits. An empty factor map is the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    /// Non-identity factors, sorted by qubit index.
    factors: Vec<(usize, PauliAxis)>,
    coefficient: f64,
}

impl PauliString {
    /// Build from unsorted factors; duplicate qubits are rejected by debug
    /// assertion (construction sites never produce them).
    pub fn new(mut factors: Vec<(usize, PauliAxis)>, coefficient: f64) -> Self {
        factors.sort_unstable_by_key(|&(q, _)| q);
        debug_assert!(
            factors.windows(2).all(|w| w[0].0 != w[1].0),
            "duplicate qubit in Pauli string"
        );
        Self {
            factors,
            coefficient,
        }
    }

    pub(super) fn from_factor_map(factors: Vec<(usize, PauliAxis)>, coefficient: f64) -> Self {
        Self {
            factors,
            coefficient,
        }
    }

    pub fn identity(coefficient: f64) -> Self {
        Self {
            factors: Vec::new(),
            coefficient,
        }
    }

    pub fn single_qubit(qubit: usize, axis: PauliAxis, coefficient: f64) -> Self {
        Self::new(vec![(qubit, axis)], coefficient)
    }

    pub fn two_qubit(
        a: usize,
        axis_a: PauliAxis,
        b: usize,
        axis_b: PauliAxis,
        coefficient: f64,
    ) -> Self {
        Self::new(vec![(a, axis_a), (b, axis_b)], coefficient)
    }

    pub fn factors(&self) -> &[(usize, PauliAxis)] {
        &self.factors
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q)
    }

    /// The set of qubits this string acts on.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }
}

/// A Hermitian qubit Hamiltonian: a canonically sorted, merged sum of
/// real-weighted Pauli strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinHamiltonian {
    nqubits: usize,
    terms: Vec<PauliString>,
}

impl SpinHamiltonian {
    /// Canonicalize: sort by factor map, merge equal maps, drop coefficients
    /// below [`crate::COEFF_EPS`].
    pub fn new(nqubits: usize, terms: Vec<PauliString>) -> Result<Self, AlgebraError> {
        for t in &terms {
            if let Some(q) = t.max_qubit() {
                if q >= nqubits {
                    return Err(AlgebraError::QubitOutOfRange { index: q, nqubits });
                }
            }
        }
        // Contributions are sorted before summation so the canonical form
        // is bit-identical no matter how the input list was ordered.
        let mut merged: std::collections::BTreeMap<Vec<(usize, PauliAxis)>, Vec<f64>> =
            std::collections::BTreeMap::new();
        for t in terms {
            merged.entry(t.factors).or_default().push(t.coefficient);
        }
        let terms = merged
            .into_iter()
            .map(|(factors, mut parts)| {
                parts.sort_by(|a, b| a.total_cmp(b));
                PauliString {
                    factors,
                    coefficient: parts.into_iter().sum(),
                }
            })
            .filter(|t| t.coefficient.abs() >= crate::COEFF_EPS)
            .collect();
        Ok(Self { nqubits, terms })
    }

    pub fn zero(nqubits: usize) -> Self {
        Self {
            nqubits,
            terms: Vec::new(),
        }
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Sum of two Hamiltonians on the same qubit count.
    pub fn add(&self, other: &SpinHamiltonian) -> Result<SpinHamiltonian, AlgebraError> {
        let nqubits = self.nqubits.max(other.nqubits);
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .cloned()
            .collect();
        SpinHamiltonian::new(nqubits, terms)
    }

    /// Triangle-inequality bound on the operator norm: sum of |coefficients|.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Conjugate by per-qubit SU(2) rotations given as SO(3) axis maps:
    /// `sigma_a -> sum_b M[q][b][a] sigma_b` on qubit `q`. Spectra are
    /// preserved exactly; a field `B.sigma` becomes `(M B).sigma`.
    ///
    /// A k-local term expands into at most `3^k` terms, so this is meant
    /// for the 2-local Hamiltonians it is used on.
    pub fn rotate_axes(
        &self,
        rotations: &[[[f64; 3]; 3]],
    ) -> Result<SpinHamiltonian, AlgebraError> {
        if rotations.len() != self.nqubits {
            return Err(AlgebraError::InvalidLattice(
                "one rotation per qubit required".into(),
            ));
        }
        let axis_index = |a: PauliAxis| PauliAxis::ALL.iter().position(|&x| x == a).unwrap();
        let mut terms = Vec::new();
        for term in &self.terms {
            // Expand the tensor product of per-qubit images.
            let mut partial: Vec<(Vec<(usize, PauliAxis)>, f64)> =
                vec![(Vec::new(), term.coefficient)];
            for &(q, a) in &term.factors {
                let col = axis_index(a);
                let mut next = Vec::with_capacity(partial.len() * 3);
                for (factors, coeff) in &partial {
                    for (row, &b) in PauliAxis::ALL.iter().enumerate() {
                        let weight = rotations[q][row][col];
                        if weight != 0.0 {
                            let mut f = factors.clone();
                            f.push((q, b));
                            next.push((f, coeff * weight));
                        }
                    }
                }
                partial = next;
            }
            for (factors, coeff) in partial {
                terms.push(PauliString::new(factors, coeff));
            }
        }
        SpinHamiltonian::new(self.nqubits, terms)
    }

    /// Relabel qubits through a permutation (`new = perm[old]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<SpinHamiltonian, AlgebraError> {
        if perm.len() != self.nqubits {
            return Err(AlgebraError::InvalidLattice(
                "permutation length mismatch".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                PauliString::new(
                    t.factors.iter().map(|&(q, a)| (perm[q], a)).collect(),
                    t.coefficient,
                )
            })
            .collect();
        SpinHamiltonian::new(self.nqubits, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_order_independent() {
        let a = PauliString::two_qubit(0, PauliAxis::X, 1, PauliAxis::X, 0.5);
        let b = PauliString::single_qubit(0, PauliAxis::Z, -0.25);
        let c = PauliString::two_qubit(1, PauliAxis::X, 0, PauliAxis::X, 0.5);
        let h1 = SpinHamiltonian::new(2, vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let h2 = SpinHamiltonian::new(2, vec![c, b, a]).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.terms().len(), 2);
        assert_eq!(h1.terms()[0].coefficient(), 1.0);
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = PauliString::single_qubit(0, PauliAxis::Y, 1.0);
        let b = PauliString::single_qubit(0, PauliAxis::Y, -1.0);
        let h = SpinHamiltonian::new(1, vec![a, b]).unwrap();
        assert!(h.terms().is_empty());
    }

    #[test]
    fn axis_products_close() {
        use PauliAxis::*;
        let (axis, phase) = axis_product(X, Y);
        assert_eq!(axis, Some(Z));
        assert_eq!(phase, Complex64::new(0.0, 1.0));
        let (axis, _) = axis_product(Z, Z);
        assert_eq!(axis, None);
    }

    #[test]
    fn out_of_range_rejected() {
        let t = PauliString::single_qubit(5, PauliAxis::X, 1.0);
        assert!(matches!(
            SpinHamiltonian::new(2, vec![t]),
            Err(AlgebraError::QubitOutOfRange { index: 5, .. })
        ));
    }
}
