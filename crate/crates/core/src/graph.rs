//! Dual graphs of semi-stable curves: vertices carry component genera, edges
//! are double points (self-loops allowed).

use serde::{Deserialize, Serialize};

use crate::error::StructureError;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DualGraph {
    /// Genus of each component.
    pub genus: Vec<u32>,
    /// Edge endpoints in a fixed stored orientation.
    pub edges: Vec<(VertexId, VertexId)>,
}

impl DualGraph {
    pub fn new(genus: Vec<u32>, edges: Vec<(VertexId, VertexId)>) -> Result<Self, StructureError> {
        let n = genus.len();
        for &(a, b) in &edges {
            if a.0 >= n || b.0 >= n {
                return Err(StructureError(format!(
                    "edge endpoint out of range ({}, {}) with {n} vertices",
                    a.0, b.0
                )));
            }
        }
        Ok(DualGraph { genus, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.genus.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.genus.len()).map(VertexId)
    }

    /// Degree with self-loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Edges incident to v (self-loops listed once).
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| EdgeId(i))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x.0 == v && !seen[y.0] {
                        seen[y.0] = true;
                        stack.push(y.0);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Arithmetic genus `Σ g(v) + #edges - #vertices + 1`.
    pub fn arithmetic_genus(&self) -> Result<i64, StructureError> {
        if !self.is_connected() {
            return Err(StructureError("graph is disconnected".into()));
        }
        let g: i64 = self.genus.iter().map(|&g| g as i64).sum();
        Ok(g + self.edge_count() as i64 - self.vertex_count() as i64 + 1)
    }

    /// Tree = connected with first Betti number zero.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }
}

/// The usual stability condition on a dual graph: genus-0 components need
/// degree at least 3, genus-1 components at least 1.
pub fn stability_check(graph: &DualGraph) -> bool {
    graph.vertices().all(|v| match graph.genus[v.0] {
        0 => graph.degree(v) >= 3,
        1 => graph.degree(v) >= 1,
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(genus: &[u32], edges: &[(usize, usize)]) -> DualGraph {
        DualGraph::new(
            genus.to_vec(),
            edges
                .iter()
                .map(|&(a, b)| (VertexId(a), VertexId(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn arithmetic_genus_examples() {
        assert_eq!(graph(&[1, 1], &[(0, 1)]).arithmetic_genus().unwrap(), 2);
        assert_eq!(graph(&[0], &[(0, 0)]).arithmetic_genus().unwrap(), 1);
        assert_eq!(
            graph(&[0, 0, 0], &[(0, 1), (1, 2), (2, 0)])
                .arithmetic_genus()
                .unwrap(),
            1
        );
        assert!(graph(&[0, 0], &[]).arithmetic_genus().is_err());
    }

    #[test]
    fn genus_invariant_under_leaf_attachment() {
        let base = graph(&[1, 1], &[(0, 1)]);
        let with_leaf = graph(&[1, 1, 0], &[(0, 1), (1, 2)]);
        assert_eq!(
            base.arithmetic_genus().unwrap(),
            with_leaf.arithmetic_genus().unwrap()
        );
    }

    #[test]
    fn stability_examples() {
        // genus-0 vertex of degree 2 in a chain is unstable
        assert!(!stability_check(&graph(&[1, 0, 1], &[(0, 1), (1, 2)])));
        assert!(stability_check(&graph(&[1, 1], &[(0, 1)])));
        assert!(stability_check(&graph(&[2], &[])));
        // self-loop counts twice toward the degree
        assert!(stability_check(&graph(&[0], &[(0, 0), (0, 0)])));
        assert!(!stability_check(&graph(&[0], &[(0, 0)])));
    }
}
