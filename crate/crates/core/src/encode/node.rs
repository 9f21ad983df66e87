use super::{QuadMultiset, Quadruplet};
use crate::error::Result;
use crate::graph::{BoundedBfs, Graph, NodeId};

/// Per-worker node encoder. Owns its BFS scratch so one instance can encode
/// any number of roots of the same graph without reallocating.
#[derive(Debug, Clone)]
pub struct NodeEncoder<'g> {
    g: &'g Graph,
    k: usize,
    bfs: BoundedBfs,
}

impl<'g> NodeEncoder<'g> {
    pub fn new(g: &'g Graph, k: usize) -> Self {
        Self {
            g,
            k,
            bfs: BoundedBfs::new(g.node_count()),
        }
    }

    /// BFS tree edges followed so far, over all roots.
    pub fn edges_traversed(&self) -> u64 {
        self.bfs.tree_edges
    }

    /// Quadruplet of every member of the ball around `v`, in BFS order.
    ///
    /// Levels come from the bounded BFS; relative degrees from one scan of
    /// the members' adjacency rows, where each induced edge is classified
    /// once from each endpoint.
    pub fn member_quads(&mut self, v: NodeId) -> Result<Vec<(NodeId, Quadruplet)>> {
        self.g.check_node(v)?;
        self.bfs.run(self.g, v, self.k);
        let bfs = &self.bfs;
        Ok(bfs
            .members()
            .iter()
            .map(|&u| {
                let lu = bfs.member_distance(u);
                let mut counts = [0u32; 3];
                for &w in self.g.neighbors(u) {
                    if bfs.contains(w) {
                        // Adjacent members differ by at most one level.
                        let slot = (bfs.member_distance(w) + 1 - lu) as usize;
                        counts[slot] += 1;
                    }
                }
                (u, Quadruplet::from_counts(lu, counts))
            })
            .collect())
    }

    pub fn encode(&mut self, v: NodeId) -> Result<QuadMultiset> {
        let quads = self.member_quads(v)?;
        Ok(QuadMultiset::from_quads(v, self.k, quads.into_iter().map(|(_, q)| q)))
    }
}

pub fn encode_node_nd(g: &Graph, v: NodeId, k: usize) -> Result<QuadMultiset> {
    NodeEncoder::new(g, k).encode(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn q(l: u32, a: u32, d: u32, b: u32) -> Quadruplet {
        Quadruplet::new(l, a, d, b)
    }

    #[test]
    fn isolated_node() {
        let g = Graph::empty(3);
        for k in 0..4 {
            let e = encode_node_nd(&g, 1, k).unwrap();
            assert_eq!(e.entries(), &[(q(0, 0, 0, 0), 1)]);
        }
    }

    #[test]
    fn triangle_one_hop() {
        let k3 = generate(Family::Cycle { n: 3 }).unwrap();
        let e = encode_node_nd(&k3, 0, 1).unwrap();
        assert_eq!(e.entries(), &[(q(0, 0, 2, 2), 1), (q(1, 1, 2, 0), 2)]);
    }

    #[test]
    fn rook_two_hop() {
        // A cell off the root's row and column shares exactly mu = 2
        // neighbours with the root, so two of its six edges lead inward.
        let g = generate(Family::Rook { n: 4 }).unwrap();
        for v in 0..16 {
            let e = encode_node_nd(&g, v, 2).unwrap();
            assert_eq!(
                e.entries(),
                &[(q(0, 0, 6, 6), 1), (q(1, 1, 6, 3), 6), (q(2, 2, 6, 0), 9)]
            );
        }
    }

    #[test]
    fn relative_degree_triple_of_a_first_shell_node() {
        // Root 0; node 1 has one edge back to the root, two edges to the
        // second shell (3, 4) and one same-level edge (to 2): triple (1, 4, 2).
        let g = Graph::from_edge_list(6, &[(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (3, 5)])
            .unwrap();
        let quads = NodeEncoder::new(&g, 2).member_quads(0).unwrap();
        let (_, q1) = quads.iter().find(|(u, _)| *u == 1).unwrap();
        assert_eq!((q1.l, q1.d_minus, q1.d, q1.d_plus), (1, 1, 4, 2));
        assert_eq!(q1.d_zero(), 1);
    }

    #[test]
    fn zero_depth_root_has_no_edges() {
        let k3 = generate(Family::Cycle { n: 3 }).unwrap();
        let e = encode_node_nd(&k3, 2, 0).unwrap();
        assert_eq!(e.entries(), &[(q(0, 0, 0, 0), 1)]);
    }

    #[test]
    fn out_of_range() {
        assert!(encode_node_nd(&Graph::empty(2), 2, 1).is_err());
    }
}
