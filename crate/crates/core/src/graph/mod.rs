//! Immutable undirected simple graphs in compressed-row form.
//!
//! Node ids are dense integers `0..n`. Every undirected edge `{u, v}` is
//! stored once in the canonical edge list as `(u, v)` with `u < v`; its
//! position in that list is its stable edge id. Adjacency rows are sorted
//! and carry the edge id of every incident edge, so traversals can move
//! between node and edge indexing without lookups.

mod bfs;
pub mod generate;
mod io;

pub use bfs::{bfs_levels, diameter, ego_subgraph, BoundedBfs, EgoNet, LevelMap};
pub use generate::{generate, Family};
pub use io::{parse_edge_list, read_edge_list, write_edge_list};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    slot_edge: Vec<EdgeId>,
    edges: Vec<(NodeId, NodeId)>,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    ///
    /// Pairs may be given in either orientation; `(1, 0)` and `(0, 1)` are
    /// the same edge and supplying both is a [`Error::DuplicateEdge`].
    pub fn from_edge_list(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut canonical = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::OutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical(n, canonical))
    }

    /// `edges` must be sorted, deduplicated and oriented `u < v < n`.
    pub(crate) fn from_canonical(n: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        let mut slot_edge = vec![0; 2 * edges.len()];
        // Sorted (u, v) input fills every row in ascending order: all (w, u)
        // with w < u precede every (u, v).
        for (id, &(u, v)) in edges.iter().enumerate() {
            targets[cursor[u]] = v;
            slot_edge[cursor[u]] = id;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            slot_edge[cursor[v]] = id;
            cursor[v] += 1;
        }
        Self {
            offsets,
            targets,
            slot_edge,
            edges,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Edge ids aligned with [`Graph::neighbors`].
    #[inline]
    pub fn incident_edges(&self, u: NodeId) -> &[EdgeId] {
        &self.slot_edge[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|u| self.degree(u))
            .max()
            .unwrap_or(0)
    }

    /// Canonical edge list, indexed by edge id.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<(NodeId, NodeId)> {
        self.edges.get(id).copied().ok_or(Error::EdgeOutOfRange {
            id,
            m: self.edges.len(),
        })
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if u >= self.node_count() {
            return None;
        }
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.incident_edges(u)[i])
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                node,
                n: self.node_count(),
            })
        }
    }

    /// Relabels nodes so that node `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[NodeId]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::NotABijection(n));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotABijection(n));
            }
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Ok(Self::from_canonical(n, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_well_formed(g: &Graph) {
        let degree_sum: usize = (0..g.node_count()).map(|u| g.degree(u)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
        for u in 0..g.node_count() {
            let row = g.neighbors(u);
            assert!(row.windows(2).all(|w| w[0] < w[1]));
            for (&v, &e) in row.iter().zip(g.incident_edges(u)) {
                assert_ne!(u, v);
                assert!(g.has_edge(v, u));
                assert_eq!(g.edges()[e], (u.min(v), u.max(v)));
            }
        }
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_well_formed(&g);
    }

    #[test]
    fn triangle_degrees() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((0..3).all(|u| g.degree(u) == 2));
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_well_formed(&g);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 0)]),
            Err(Error::SelfLoop(0))
        );
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 3)]),
            Err(Error::OutOfRange { node: 3, n: 3 })
        );
    }

    #[test]
    fn rows_sorted_when_input_is_shuffled() {
        let g = Graph::from_edge_list(5, &[(4, 2), (0, 2), (3, 2), (2, 1), (0, 4)]).unwrap();
        assert_eq!(g.neighbors(2), &[0, 1, 3, 4]);
        assert_well_formed(&g);
        assert_eq!(g.edge_id(2, 4), Some(4));
        assert_eq!(g.edge_id(4, 2), Some(4));
        assert_eq!(g.edge_id(1, 4), None);
    }

    #[test]
    fn permute_identity_and_reversal() {
        let c6 = generate(Family::Cycle { n: 6 }).unwrap();
        let id: Vec<_> = (0..6).collect();
        assert_eq!(c6.permute(&id).unwrap(), c6);
        let rev: Vec<_> = (0..6).rev().collect();
        assert_eq!(c6.permute(&rev).unwrap().edges(), c6.edges());
        let k3 = generate(Family::Cycle { n: 3 }).unwrap();
        assert_eq!(k3.permute(&[2, 0, 1]).unwrap(), k3);
    }

    #[test]
    fn permute_rejects_non_bijection() {
        let g = Graph::empty(3);
        assert_eq!(g.permute(&[0, 0, 1]), Err(Error::NotABijection(3)));
        assert_eq!(g.permute(&[0, 1]), Err(Error::NotABijection(3)));
        assert_eq!(g.permute(&[0, 1, 3]), Err(Error::NotABijection(3)));
    }
}
