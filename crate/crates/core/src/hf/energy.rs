use super::HfError;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// A Hartree-Fock determinant, stored as the one-particle projector
/// `P = u^+ u` of its orthonormal orbital coefficients.
#[derive(Debug, Clone)]
pub struct HfState {
    projector: DMatrix<Complex64>,
    electrons: usize,
}

impl HfState {
    /// From an orbital coefficient matrix (N rows, M modes). Rows are
    /// orthonormalized by QR, so any full-rank input is accepted.
    ///
    /// The stored matrix is the contraction matrix
    /// `Gamma_ij = <a+_i a_j> = conj(u^+ u)_ij`: note the conjugate, which
    /// only matters for complex orbitals.
    pub fn from_orbitals(u: &DMatrix<Complex64>) -> Result<Self, HfError> {
        let n = u.nrows();
        // Orthonormalize the row space: QR of u^+ gives an M x N isometry.
        let qr = u.adjoint().qr();
        let q = qr.q().conjugate();
        let projector = &q * q.adjoint();
        Self::from_projector(projector, n)
    }

    /// From an explicit projector; validates Hermiticity, idempotency, and
    /// the trace.
    pub fn from_projector(
        projector: DMatrix<Complex64>,
        electrons: usize,
    ) -> Result<Self, HfError> {
        let herm = (&projector - projector.adjoint())
            .iter()
            .map(|x| x.norm())
            .fold(0.0f64, f64::max);
        if herm > 1e-10 {
            return Err(HfError::BadProjector("Hermiticity", herm));
        }
        let idem = (&projector * &projector - &projector)
            .iter()
            .map(|x| x.norm())
            .fold(0.0f64, f64::max);
        if idem > 1e-10 {
            return Err(HfError::BadProjector("idempotency", idem));
        }
        let tr = projector.trace();
        if (tr.re - electrons as f64).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(HfError::BadProjector(
                "trace",
                (tr.re - electrons as f64).abs(),
            ));
        }
        Ok(Self {
            projector,
            electrons,
        })
    }

    /// Occupation pattern on the diagonal: the classical determinant with
    /// modes in `occupied` filled.
    pub fn from_occupation(nmodes: usize, occupied: &[usize]) -> Self {
        let mut p = DMatrix::zeros(nmodes, nmodes);
        for &m in occupied {
            p[(m, m)] = Complex64::ONE;
        }
        Self {
            projector: p,
            electrons: occupied.len(),
        }
    }

    pub fn projector(&self) -> &DMatrix<Complex64> {
        &self.projector
    }

    pub fn electrons(&self) -> usize {
        self.electrons
    }

    pub fn nmodes(&self) -> usize {
        self.projector.nrows()
    }
}

/// Sparse four-index coefficient table for `H2[i,j,k,l] a+_i a+_j a_k a_l`,
/// kept in the literal operator order.
#[derive(Debug, Clone, Default)]
pub struct FourIndex {
    entries: Vec<(usize, usize, usize, usize, Complex64)>,
}

impl FourIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, i: usize, j: usize, k: usize, l: usize, coeff: Complex64) {
        self.entries.push((i, j, k, l, coeff));
    }

    pub fn entries(&self) -> &[(usize, usize, usize, usize, Complex64)] {
        &self.entries
    }

    /// Density-density helper `c * n_a n_b` (`a != b`), normal ordered.
    pub fn density_density(&mut self, a: usize, b: usize, c: f64) {
        // n_a n_b = a+_a a+_b a_b a_a for distinct modes.
        self.push(a, b, b, a, Complex64::new(c, 0.0));
    }
}

/// Determinant expectation `<Psi(P) | H1 + H2 | Psi(P)>` by Wick
/// contraction.
pub fn hf_energy(h1: &DMatrix<Complex64>, h2: &FourIndex, state: &HfState) -> Result<f64, HfError> {
    let p = state.projector();
    let m = p.nrows();
    if h1.nrows() != m || h1.ncols() != m {
        return Err(HfError::DimensionMismatch(format!(
            "H1 is {}x{}, projector is {}x{}",
            h1.nrows(),
            h1.ncols(),
            m,
            m
        )));
    }
    let mut energy = Complex64::ZERO;
    for i in 0..m {
        for j in 0..m {
            let c = h1[(i, j)];
            if c.norm_sqr() > 0.0 {
                energy += c * p[(i, j)];
            }
        }
    }
    for &(i, j, k, l, c) in h2.entries() {
        if i.max(j).max(k).max(l) >= m {
            return Err(HfError::DimensionMismatch(format!(
                "H2 index ({i},{j},{k},{l}) outside {m} modes"
            )));
        }
        energy += c * (p[(i, l)] * p[(j, k)] - p[(i, k)] * p[(j, l)]);
    }
    debug_assert!(
        energy.im.abs() < 1e-9 * (1.0 + energy.re.abs()),
        "non-Hermitian coefficient table: imaginary energy {energy}"
    );
    Ok(energy.re)
}

/// Energy gradient on the space of Hermitian `P`: the Hermitian matrix `G`
/// with `dE = Re tr(G dP)`.
///
/// The formal entrywise derivative `F_ab = dE/dP_ab` satisfies
/// `dE = sum F_ab dP_ab`, which against the real inner product
/// `Re tr(G dP)` identifies `G = F^T` (the conjugate of the Hermitian `F`).
/// The transpose matters for complex coefficients: in the
/// `P_ij = <a+_i a_j>` convention the free-fermion minimizer is the
/// projector onto the low eigenvectors of `H1^T`, not `H1`.
pub(super) fn energy_gradient(
    h1: &DMatrix<Complex64>,
    h2: &FourIndex,
    p: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let mut f = h1.clone();
    for &(i, j, k, l, c) in h2.entries() {
        // d/dP of  c (P_il P_jk - P_ik P_jl)
        f[(i, l)] += c * p[(j, k)];
        f[(j, k)] += c * p[(i, l)];
        f[(i, k)] -= c * p[(j, l)];
        f[(j, l)] -= c * p[(i, k)];
    }
    let f = (f.clone() + f.adjoint()) * Complex64::new(0.5, 0.0);
    f.transpose()
}
