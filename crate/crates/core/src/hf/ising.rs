//! Ising spin-glass instances on the L x L x 2 lattice and their embedding
//! into a quartic fermionic Hamiltonian whose Hartree-Fock optimum encodes
//! the classical ground state.
//!
//! Each classical spin becomes a mode pair `(a_{2i}, a_{2i+1})`; a penalty
//! `lambda n_{2i} n_{2i+1}` forbids double occupancy at half filling, so
//! exactly one mode per pair is occupied and the choice is the spin. The
//! coupling `J_ij S_i S_j` is realized as
//! `J_ij sum_{p,q} (-1)^{p+q} n_{2i+p} n_{2j+q}`. Classical configurations
//! are exactly representable as determinants, so the Hartree-Fock energy of
//! the encoded argmin equals the Ising minimum with no correction.

use super::energy::{FourIndex, HfState};
use super::HfError;
use crate::algebra::{FermionHamiltonian, FermionOp, FermionTerm};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// Couplings `J_ij` in `{-1, 0, 1}` on nearest-neighbor edges of the
/// `L x L x 2` lattice. Spins are indexed `z L^2 + y L + x`.
#[derive(Debug, Clone, Serialize)]
pub struct IsingInstance {
    pub l: usize,
    couplings: Vec<(usize, usize, i8)>,
}

/// All nearest-neighbor edges of the L x L x 2 lattice.
fn lattice_edges(l: usize) -> Vec<(usize, usize)> {
    let idx = |x: usize, y: usize, z: usize| z * l * l + y * l + x;
    let mut edges = Vec::new();
    for z in 0..2 {
        for y in 0..l {
            for x in 0..l {
                if x + 1 < l {
                    edges.push((idx(x, y, z), idx(x + 1, y, z)));
                }
                if y + 1 < l {
                    edges.push((idx(x, y, z), idx(x, y + 1, z)));
                }
                if z == 0 {
                    edges.push((idx(x, y, 0), idx(x, y, 1)));
                }
            }
        }
    }
    edges
}

impl IsingInstance {
    pub fn new(l: usize, couplings: Vec<(usize, usize, i8)>) -> Result<Self, HfError> {
        let edges = lattice_edges(l);
        for &(i, j, v) in &couplings {
            if !edges
                .iter()
                .any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
            {
                return Err(HfError::NotAnEdge { i, j, l });
            }
            if ![-1i8, 0, 1].contains(&v) {
                return Err(HfError::BadCoupling(v as f64));
            }
        }
        Ok(Self { l, couplings })
    }

    /// Random couplings over every lattice edge, uniform on `{-1, 0, 1}`.
    pub fn random(l: usize, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let couplings = lattice_edges(l)
            .into_iter()
            .map(|(a, b)| (a, b, rng.random_range(-1i8..=1)))
            .collect();
        Self { l, couplings }
    }

    pub fn spins(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn couplings(&self) -> &[(usize, usize, i8)] {
        &self.couplings
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.spins()];
        for &(i, j, v) in &self.couplings {
            if v != 0 {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Classical energy of a configuration of +-1 spins.
    pub fn energy(&self, config: &[i8]) -> f64 {
        self.couplings
            .iter()
            .map(|&(i, j, v)| v as f64 * config[i] as f64 * config[j] as f64)
            .sum()
    }

    /// Text format: an `L` header line, then `i j J` edge lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.l);
        for &(i, j, v) in &self.couplings {
            out.push_str(&format!("{i} {j} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, HfError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let l: usize = lines
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or(HfError::DimensionMismatch("missing L header".into()))?;
        let mut couplings = Vec::new();
        for line in lines {
            let mut tok = line.split_whitespace();
            let parse = |t: Option<&str>| -> Result<i64, HfError> {
                t.and_then(|s| s.parse().ok())
                    .ok_or_else(|| HfError::DimensionMismatch(format!("bad edge line `{line}`")))
            };
            let i = parse(tok.next())? as usize;
            let j = parse(tok.next())? as usize;
            let v = parse(tok.next())? as i8;
            couplings.push((i, j, v));
        }
        Self::new(l, couplings)
    }
}

/// The fermionic embedding of an instance: both the Fock-space Hamiltonian
/// and the (H1, H2) tables the Hartree-Fock machinery consumes.
#[derive(Debug)]
pub struct IsingEmbedding {
    pub hamiltonian: FermionHamiltonian,
    pub h1: DMatrix<Complex64>,
    pub h2: FourIndex,
    pub nmodes: usize,
    /// Half filling: one electron per spin.
    pub electrons: usize,
    pub lambda: f64,
    /// `lambda > 4 * max_degree * N` dominates every coupling sum.
    pub dominance_ok: bool,
}

/// Embed with penalty strength `lambda` (the printed scale is `O(N^2)`;
/// the default helper uses `10 N^2`).
pub fn embed_ising(instance: &IsingInstance, lambda: f64) -> Result<IsingEmbedding, HfError> {
    let n = instance.spins();
    let nmodes = 2 * n;
    let mut h2 = FourIndex::new();
    let mut terms: Vec<FermionTerm> = Vec::new();
    let push_nn = |h2: &mut FourIndex, terms: &mut Vec<FermionTerm>, a: usize, b: usize, c: f64| {
        h2.density_density(a, b, c);
        terms.push(FermionTerm::new(
            vec![
                FermionOp::dag(a),
                FermionOp::dag(b),
                FermionOp::ann(b),
                FermionOp::ann(a),
            ],
            Complex64::new(c, 0.0),
        ));
    };

    for i in 0..n {
        push_nn(&mut h2, &mut terms, 2 * i, 2 * i + 1, lambda);
    }
    for &(i, j, v) in instance.couplings() {
        if v == 0 {
            continue;
        }
        for p in 0..2usize {
            for q in 0..2usize {
                let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
                push_nn(&mut h2, &mut terms, 2 * i + p, 2 * j + q, v as f64 * sign);
            }
        }
    }

    let hamiltonian = FermionHamiltonian::new(nmodes, terms, Some(n))?;
    let dominance_ok = lambda > 4.0 * instance.max_degree() as f64 * n as f64;
    Ok(IsingEmbedding {
        hamiltonian,
        h1: DMatrix::zeros(nmodes, nmodes),
        h2,
        nmodes,
        electrons: n,
        lambda,
        dominance_ok,
    })
}

/// The printed penalty scale.
pub fn default_lambda(n_spins: usize) -> f64 {
    10.0 * (n_spins * n_spins) as f64
}

/// The determinant encoding a classical configuration: mode `2i` occupied
/// for spin +1, mode `2i+1` for spin -1.
pub fn classical_state(config: &[i8]) -> HfState {
    let occupied: Vec<usize> = config
        .iter()
        .enumerate()
        .map(|(i, &s)| if s > 0 { 2 * i } else { 2 * i + 1 })
        .collect();
    HfState::from_occupation(2 * config.len(), &occupied)
}

#[derive(Debug, Clone, Serialize)]
pub struct DecodedSpins {
    pub spins: Vec<i8>,
    /// Sites whose mode pair had both or neither occupancy above 1/2.
    pub ambiguous: Vec<usize>,
}

/// Read the spin configuration off a near-diagonal projector.
pub fn decode_spins(state: &HfState, instance: &IsingInstance) -> Result<DecodedSpins, HfError> {
    let p = state.projector();
    let n = instance.spins();
    if p.nrows() != 2 * n {
        return Err(HfError::DimensionMismatch(format!(
            "projector has {} modes, instance needs {}",
            p.nrows(),
            2 * n
        )));
    }
    let mut max_off = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            if i != j {
                max_off = max_off.max(p[(i, j)].norm());
            }
        }
    }
    if max_off >= 0.1 {
        return Err(HfError::BadProjector(
            "diagonal dominance for spin decoding",
            max_off,
        ));
    }
    let mut spins = Vec::with_capacity(n);
    let mut ambiguous = Vec::new();
    for i in 0..n {
        let up = p[(2 * i, 2 * i)].re;
        let dn = p[(2 * i + 1, 2 * i + 1)].re;
        let occ_up = up > 0.5;
        let occ_dn = dn > 0.5;
        match (occ_up, occ_dn) {
            (true, false) => spins.push(1),
            (false, true) => spins.push(-1),
            _ => {
                ambiguous.push(i);
                spins.push(if up >= dn { 1 } else { -1 });
            }
        }
    }
    Ok(DecodedSpins { spins, ambiguous })
}

/// Exhaustive ground search; ties broken by lexicographic configuration
/// order with `-1 < +1`, comparing spin 0 first.
pub fn ising_bruteforce(instance: &IsingInstance) -> Result<(f64, Vec<i8>), HfError> {
    let n = instance.spins();
    if n > 24 {
        return Err(HfError::TooManySpins(n));
    }
    let config_of = |mask: u64| -> Vec<i8> {
        (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1i8 } else { -1 })
            .collect()
    };
    let mut best_energy = f64::INFINITY;
    let mut best: Vec<i8> = config_of(0);
    for mask in 0..(1u64 << n) {
        let config = config_of(mask);
        let e = instance.energy(&config);
        if e < best_energy - 1e-12 || (e < best_energy + 1e-12 && config < best) {
            best_energy = e;
            best = config;
        }
    }
    Ok((best_energy, best))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_lattice_has_twelve_edges() {
        assert_eq!(lattice_edges(2).len(), 12);
        let inst = IsingInstance::new(
            2,
            lattice_edges(2)
                .into_iter()
                .map(|(a, b)| (a, b, -1))
                .collect(),
        )
        .unwrap();
        // Fully ferromagnetic: minimum is -(edge count), attained aligned.
        let (e, config) = ising_bruteforce(&inst).unwrap();
        assert_eq!(e, -12.0);
        assert!(config.iter().all(|&s| s == config[0]));
    }

    #[test]
    fn all_zero_couplings_are_flat() {
        let inst = IsingInstance::new(2, vec![]).unwrap();
        let (e, config) = ising_bruteforce(&inst).unwrap();
        assert_eq!(e, 0.0);
        // Lexicographic tie-break picks all -1.
        assert!(config.iter().all(|&s| s == -1));
    }

    #[test]
    fn single_ferromagnetic_edge() {
        let inst = IsingInstance::new(2, vec![(0, 1, -1)]).unwrap();
        let (e, _) = ising_bruteforce(&inst).unwrap();
        assert_eq!(e, -1.0);
    }

    #[test]
    fn bruteforce_beats_sampling() {
        use rand::{Rng, SeedableRng};
        let inst = IsingInstance::random(2, 99);
        let (e, _) = ising_bruteforce(&inst).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let config: Vec<i8> = (0..inst.spins())
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            assert!(inst.energy(&config) >= e - 1e-12);
        }
    }

    #[test]
    fn rejects_off_lattice_couplings() {
        assert!(matches!(
            IsingInstance::new(2, vec![(0, 3, 1)]),
            Err(HfError::NotAnEdge { .. })
        ));
        assert!(IsingInstance::new(2, vec![(0, 1, 1)]).is_ok());
    }

    #[test]
    fn classical_states_reproduce_ising_energy() {
        let inst = IsingInstance::random(2, 7);
        let emb = embed_ising(&inst, default_lambda(inst.spins())).unwrap();
        assert!(emb.dominance_ok);
        let (e_min, config) = ising_bruteforce(&inst).unwrap();
        let det = classical_state(&config);
        let e_hf = super::super::hf_energy(&emb.h1, &emb.h2, &det).unwrap();
        assert!(
            (e_hf - e_min).abs() < 1e-10,
            "determinant {e_hf} vs classical {e_min}"
        );
    }

    #[test]
    fn decode_round_trips() {
        let inst = IsingInstance::random(2, 13);
        let (_, config) = ising_bruteforce(&inst).unwrap();
        let det = classical_state(&config);
        let decoded = decode_spins(&det, &inst).unwrap();
        assert_eq!(decoded.spins, config);
        assert!(decoded.ambiguous.is_empty());
    }

    #[test]
    fn text_round_trip() {
        let inst = IsingInstance::random(2, 21);
        let text = inst.to_text();
        let again = IsingInstance::from_text(&text).unwrap();
        assert_eq!(again.to_text(), text);
    }
}
