use super::{EdgeTupleMultiset, Quadruplet, SymTuple};
use crate::error::{Error, Result};
use crate::graph::{BoundedBfs, EdgeId, Graph, NodeId};

/// `S^k_u ∩ S^k_v` for an edge `<u, v>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgoIntersection {
    pub u: NodeId,
    pub v: NodeId,
    pub k: usize,
    /// `(node, distance to u, distance to v)`, ascending by node. Distances
    /// are measured inside the intersection sub-graph, with the sentinel
    /// `k + 1` reserved for members beyond depth `k` there. For adjacent
    /// endpoints they coincide with distances in the full graph.
    pub nodes: Vec<(NodeId, usize, usize)>,
    /// Induced edges `(a, b)` with `a < b`, ascending.
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Per-worker edge encoder holding the four BFS scratch buffers an edge
/// needs: one ball per endpoint and one in-intersection search per
/// endpoint.
#[derive(Debug, Clone)]
pub struct EdgeEncoder<'g> {
    g: &'g Graph,
    k: usize,
    ball_u: BoundedBfs,
    ball_v: BoundedBfs,
    view_u: BoundedBfs,
    view_v: BoundedBfs,
}

impl<'g> EdgeEncoder<'g> {
    pub fn new(g: &'g Graph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams(
                "edge-centric encoding needs k >= 1".into(),
            ));
        }
        let n = g.node_count();
        Ok(Self {
            g,
            k,
            ball_u: BoundedBfs::new(n),
            ball_v: BoundedBfs::new(n),
            view_u: BoundedBfs::new(n),
            view_v: BoundedBfs::new(n),
        })
    }

    pub fn edges_traversed(&self) -> u64 {
        self.ball_u.tree_edges
            + self.ball_v.tree_edges
            + self.view_u.tree_edges
            + self.view_v.tree_edges
    }

    fn explore(&mut self, u: NodeId, v: NodeId) {
        let (g, k) = (self.g, self.k);
        self.ball_u.run(g, u, k);
        self.ball_v.run(g, v, k);
        let (bu, bv) = (&self.ball_u, &self.ball_v);
        let inside = |w: NodeId| bu.contains(w) && bv.contains(w);
        self.view_u.run_within(g, u, k, inside);
        self.view_v.run_within(g, v, k, inside);
    }

    fn in_intersection(&self, w: NodeId) -> bool {
        self.ball_u.contains(w) && self.ball_v.contains(w)
    }

    fn view_distance(&self, view: &BoundedBfs, w: NodeId) -> u32 {
        view.distance(w).map_or(self.k as u32 + 1, |d| d as u32)
    }

    fn quad_in_view(&self, view: &BoundedBfs, w: NodeId) -> Quadruplet {
        let lw = self.view_distance(view, w);
        let mut counts = [0u32; 3];
        for &x in self.g.neighbors(w) {
            if self.in_intersection(x) {
                // Bounded BFS levels inside the intersection, with the k+1
                // sentinel, keep adjacent members within one level.
                let slot = (self.view_distance(view, x) + 1 - lw) as usize;
                counts[slot] += 1;
            }
        }
        Quadruplet::from_counts(lw, counts)
    }

    fn members(&self) -> Vec<NodeId> {
        self.ball_u
            .members()
            .iter()
            .copied()
            .filter(|&w| self.ball_v.contains(w))
            .collect()
    }

    fn endpoints(&self, id: EdgeId) -> Result<(NodeId, NodeId)> {
        self.g.edge(id)
    }

    pub fn intersect(&mut self, u: NodeId, v: NodeId) -> Result<EgoIntersection> {
        self.g.check_node(u)?;
        self.g.check_node(v)?;
        if !self.g.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        self.explore(u, v);
        let mut members = self.members();
        members.sort_unstable();
        let nodes = members
            .iter()
            .map(|&w| {
                (
                    w,
                    self.view_distance(&self.view_u, w) as usize,
                    self.view_distance(&self.view_v, w) as usize,
                )
            })
            .collect();
        let mut edges = Vec::new();
        for &a in &members {
            for &b in self.g.neighbors(a) {
                if a < b && self.in_intersection(b) {
                    edges.push((a, b));
                }
            }
        }
        Ok(EgoIntersection {
            u,
            v,
            k: self.k,
            nodes,
            edges,
        })
    }

    pub fn encode(&mut self, id: EdgeId) -> Result<EdgeTupleMultiset> {
        let (u, v) = self.endpoints(id)?;
        self.explore(u, v);
        let tuples: Vec<_> = self
            .members()
            .into_iter()
            .map(|w| {
                SymTuple::new(
                    self.quad_in_view(&self.view_u, w),
                    self.quad_in_view(&self.view_v, w),
                )
            })
            .collect();
        Ok(EdgeTupleMultiset::from_tuples(id, self.k, tuples))
    }
}

pub fn intersect_ego(g: &Graph, u: NodeId, v: NodeId, k: usize) -> Result<EgoIntersection> {
    EdgeEncoder::new(g, k)?.intersect(u, v)
}

pub fn encode_edge_ed(g: &Graph, edge: EdgeId, k: usize) -> Result<EdgeTupleMultiset> {
    EdgeEncoder::new(g, k)?.encode(edge)
}
