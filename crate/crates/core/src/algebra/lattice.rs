use super::AlgebraError;
use serde::{Deserialize, Serialize};

/// How a lattice's edge set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeLayout {
    /// Every 2D nearest-neighbor pair on the `width x height` grid.
    Full2d,
    /// A hand-picked subset of grid edges, as used by gadget constructions.
    SparseGadget,
    /// A 1D chain.
    Chain,
}

/// A finite qubit/site lattice: a `width x height` grid (sites numbered
/// row-major) together with an explicit edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGraph {
    width: usize,
    height: usize,
    edges: Vec<(usize, usize)>,
    layout: LatticeLayout,
}

impl LatticeGraph {
    /// Full 2D square lattice with nearest-neighbor edges.
    pub fn full_2d(width: usize, height: usize) -> Self {
        let mut edges = Vec::new();
        for y in 0..height {
            for x in 0..width {
                let s = y * width + x;
                if x + 1 < width {
                    edges.push((s, s + 1));
                }
                if y + 1 < height {
                    edges.push((s, s + width));
                }
            }
        }
        Self {
            width,
            height,
            edges,
            layout: LatticeLayout::Full2d,
        }
    }

    /// 1D chain of `n` sites.
    pub fn chain(n: usize) -> Self {
        Self {
            width: n,
            height: 1,
            edges: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            layout: LatticeLayout::Chain,
        }
    }

    /// Grid with an explicit edge subset; validates bounds and duplicates.
    pub fn sparse(
        width: usize,
        height: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, AlgebraError> {
        let g = Self {
            width,
            height,
            edges,
            layout: LatticeLayout::SparseGadget,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.nsites();
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == b {
                return Err(AlgebraError::InvalidLattice(format!(
                    "self-loop on site {a}"
                )));
            }
            if a >= n || b >= n {
                return Err(AlgebraError::InvalidLattice(format!(
                    "edge ({a}, {b}) out of bounds for {n} sites"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(AlgebraError::InvalidLattice(format!(
                    "duplicate edge ({a}, {b})"
                )));
            }
        }
        Ok(())
    }

    pub fn nsites(&self) -> usize {
        self.width * self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn layout(&self) -> LatticeLayout {
        self.layout
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Site index of grid coordinates (row-major).
    pub fn site(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a))
    }

    /// Maximum vertex degree.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.nsites()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// The subgraph induced by `keep`, with sites relabeled to `0..keep.len()`
    /// in ascending original order. Returns the graph and the relabeling map
    /// (original site -> new index).
    pub fn induced_subgraph(
        &self,
        keep: &std::collections::BTreeSet<usize>,
    ) -> (LatticeGraph, Vec<usize>) {
        let kept: Vec<usize> = keep.iter().copied().collect();
        let mut new_index = vec![usize::MAX; self.nsites()];
        for (ni, &s) in kept.iter().enumerate() {
            new_index[s] = ni;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep.contains(&a) && keep.contains(&b))
            .map(|&(a, b)| (new_index[a], new_index[b]))
            .collect();
        (
            LatticeGraph {
                width: kept.len(),
                height: 1,
                edges,
                layout: LatticeLayout::SparseGadget,
            },
            kept,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_2d_edge_count() {
        // 2x2 grid: 4 nearest-neighbor edges.
        let g = LatticeGraph::full_2d(2, 2);
        assert_eq!(g.nsites(), 4);
        assert_eq!(g.edges().len(), 4);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(2, 3));
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 3));
        assert!(!g.has_edge(0, 3));
    }

    #[test]
    fn sparse_rejects_duplicates_and_loops() {
        assert!(LatticeGraph::sparse(2, 2, vec![(0, 0)]).is_err());
        assert!(LatticeGraph::sparse(2, 2, vec![(0, 1), (1, 0)]).is_err());
        assert!(LatticeGraph::sparse(2, 2, vec![(0, 7)]).is_err());
        assert!(LatticeGraph::sparse(2, 2, vec![(0, 3), (1, 2)]).is_ok());
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = LatticeGraph::chain(3);
        let keep: std::collections::BTreeSet<usize> = [0, 2].into_iter().collect();
        let (sub, map) = g.induced_subgraph(&keep);
        assert_eq!(sub.nsites(), 2);
        assert!(sub.edges().is_empty());
        assert_eq!(map, vec![0, 2]);
    }
}
