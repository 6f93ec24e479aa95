use super::AlgebraError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Electron spin projection; `Up` orders before `Down` at each site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spin {
    Up = 0,
    Down = 1,
}

/// Bijection between (site, spin) labels and linear fermionic mode indices.
///
/// The default lays modes out row-wise by site with the spin-up mode before
/// the spin-down mode: `(a_{0,up}, a_{0,dn}, a_{1,up}, ...)`. All
/// Jordan-Wigner sign conventions follow from this single global choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeOrdering {
    /// `mode_of[2 * site + spin]` = linear mode index.
    mode_of: Vec<usize>,
    /// Qubit carrying each mode under Jordan-Wigner (inverse-free here:
    /// mode index m maps to qubit `qubit_of[m]`).
    qubit_of: Vec<usize>,
}

impl ModeOrdering {
    /// Row-wise site order, spin-up first; modes map to qubits identically.
    pub fn standard(nsites: usize) -> Self {
        let n = 2 * nsites;
        Self {
            mode_of: (0..n).collect(),
            qubit_of: (0..n).collect(),
        }
    }

    /// Custom bijection `(site, spin) -> mode`; validated.
    pub fn custom(mode_of: Vec<usize>) -> Result<Self, AlgebraError> {
        let n = mode_of.len();
        let mut seen = vec![false; n];
        for &m in &mode_of {
            if m >= n || seen[m] {
                return Err(AlgebraError::OrderingNotBijective);
            }
            seen[m] = true;
        }
        let mut qubit_of = vec![0usize; n];
        for (slot, &m) in mode_of.iter().enumerate() {
            // Mode m sits at position `slot` in the canonical layout; under
            // Jordan-Wigner it is assigned qubit `slot`... the qubit of a
            // mode is its rank in the ordering.
            qubit_of[m] = slot;
        }
        Ok(Self { mode_of, qubit_of })
    }

    pub fn nmodes(&self) -> usize {
        self.mode_of.len()
    }

    pub fn mode(&self, site: usize, spin: Spin) -> usize {
        self.mode_of[2 * site + spin as usize]
    }

    pub fn qubit_of_mode(&self, mode: usize) -> usize {
        self.qubit_of[mode]
    }
}

/// A single ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FermionOp {
    pub mode: usize,
    pub dagger: bool,
}

impl FermionOp {
    pub fn dag(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn ann(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

/// An ordered product of ladder operators with a complex coefficient,
/// applied left to right as written (leftmost operator acts last).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionTerm {
    operators: Vec<FermionOp>,
    coefficient: Complex64,
}

impl FermionTerm {
    pub fn new(operators: Vec<FermionOp>, coefficient: Complex64) -> Self {
        Self {
            operators,
            coefficient,
        }
    }

    /// Quadratic term `c * a+_i a_j`.
    pub fn hopping(i: usize, j: usize, coefficient: Complex64) -> Self {
        Self::new(vec![FermionOp::dag(i), FermionOp::ann(j)], coefficient)
    }

    pub fn operators(&self) -> &[FermionOp] {
        &self.operators
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    /// Hermitian conjugate: reversed operator order, daggers flipped,
    /// coefficient conjugated.
    pub fn conjugate(&self) -> Self {
        Self {
            operators: self
                .operators
                .iter()
                .rev()
                .map(|op| FermionOp {
                    mode: op.mode,
                    dagger: !op.dagger,
                })
                .collect(),
            coefficient: self.coefficient.conj(),
        }
    }

    fn signature(&self) -> Vec<(usize, bool)> {
        self.operators
            .iter()
            .map(|op| (op.mode, op.dagger))
            .collect()
    }

    fn creation_balance(&self) -> i64 {
        self.operators
            .iter()
            .map(|op| if op.dagger { 1 } else { -1 })
            .sum()
    }
}

/// A Hermitian fermionic Hamiltonian over `nmodes` modes, optionally tagged
/// with a fixed particle-number sector.
///
/// Hermiticity is enforced at construction: every term's conjugate must be
/// present (possibly itself). Terms are canonically sorted and merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionHamiltonian {
    nmodes: usize,
    terms: Vec<FermionTerm>,
    sector: Option<usize>,
}

impl FermionHamiltonian {
    pub fn new(
        nmodes: usize,
        terms: Vec<FermionTerm>,
        sector: Option<usize>,
    ) -> Result<Self, AlgebraError> {
        for t in &terms {
            for op in &t.operators {
                if op.mode >= nmodes {
                    return Err(AlgebraError::ModeOutOfRange {
                        index: op.mode,
                        nmodes,
                    });
                }
            }
        }
        // Canonical merge on the exact operator sequence; contributions are
        // sorted before summation so the result is order-independent.
        type Merged =
            std::collections::BTreeMap<Vec<(usize, bool)>, (Vec<FermionOp>, Vec<Complex64>)>;
        let mut merged: Merged = std::collections::BTreeMap::new();
        for t in terms {
            let key = t.signature();
            let entry = merged
                .entry(key)
                .or_insert_with(|| (t.operators.clone(), Vec::new()));
            entry.1.push(t.coefficient);
        }
        let terms: Vec<FermionTerm> = merged
            .into_values()
            .map(|(operators, mut parts)| {
                parts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                FermionTerm {
                    operators,
                    coefficient: parts.into_iter().sum(),
                }
            })
            .filter(|t| t.coefficient.norm() >= crate::COEFF_EPS)
            .collect();

        // Hermiticity: each term's conjugate must appear with the conjugate
        // coefficient.
        for t in &terms {
            let conj = t.conjugate();
            let found = terms
                .iter()
                .find(|u| u.signature() == conj.signature())
                .map(|u| u.coefficient);
            match found {
                Some(c) if (c - conj.coefficient).norm() < 1e-12 * (1.0 + c.norm()) => {}
                _ => return Err(AlgebraError::NotHermitian(t.coefficient)),
            }
        }
        Ok(Self {
            nmodes,
            terms,
            sector,
        })
    }

    pub fn nmodes(&self) -> usize {
        self.nmodes
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn sector(&self) -> Option<usize> {
        self.sector
    }

    pub fn with_sector(mut self, sector: Option<usize>) -> Self {
        self.sector = sector;
        self
    }

    /// True when every term has as many creators as annihilators, in which
    /// case the Hamiltonian commutes with total particle number.
    pub fn conserves_number(&self) -> bool {
        self.terms.iter().all(|t| t.creation_balance() == 0)
    }
}

/// Occupation bitmasks of fixed particle number, in ascending (lexicographic
/// bitmask) order. Bit `m` of a mask is the occupation of mode `m`.
pub fn sector_basis(nmodes: usize, particles: usize) -> Vec<u64> {
    assert!(nmodes <= 63, "sector basis limited to 63 modes");
    let mut basis = Vec::new();
    for mask in 0u64..(1u64 << nmodes) {
        if mask.count_ones() as usize == particles {
            basis.push(mask);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermiticity_enforced() {
        // a+_0 a_1 alone is not Hermitian.
        let t = FermionTerm::hopping(0, 1, Complex64::ONE);
        assert!(FermionHamiltonian::new(2, vec![t.clone()], None).is_err());
        let ok = FermionHamiltonian::new(2, vec![t.clone(), t.conjugate()], None);
        assert!(ok.is_ok());
    }

    #[test]
    fn number_operator_is_self_conjugate() {
        let t = FermionTerm::hopping(0, 0, Complex64::ONE);
        let h = FermionHamiltonian::new(1, vec![t], None).unwrap();
        assert!(h.conserves_number());
    }

    #[test]
    fn sector_basis_counts() {
        assert_eq!(sector_basis(4, 2).len(), 6);
        assert_eq!(sector_basis(4, 0), vec![0]);
        // Ascending order.
        let b = sector_basis(4, 2);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn custom_ordering_validated() {
        assert!(ModeOrdering::custom(vec![0, 0]).is_err());
        assert!(ModeOrdering::custom(vec![1, 0]).is_ok());
    }
}
