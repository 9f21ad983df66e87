//! Node-centric (ND) and edge-centric (ED) ego-network encodings.
//!
//! For a root `v` and depth `k`, every member `u` of the induced ball
//! `S = S^k_v` is described by a [`Quadruplet`]: its distance to `v` and
//! its degree inside `S` split by whether each incident edge leads one hop
//! closer to `v`, stays on the same level, or leads one hop farther. The
//! node encoding is the multiset of those quadruplets.
//!
//! The edge encoding of `<u, v>` applies the same description inside the
//! intersection `S^k_u ∩ S^k_v`, once relative to each endpoint, and keeps
//! the unordered pair of views for every member.

mod edge;
mod node;
mod parallel;

pub use edge::{encode_edge_ed, intersect_ego, EdgeEncoder, EgoIntersection};
pub use node::{encode_node_nd, NodeEncoder};
pub use parallel::{
    encode_graph_ed, encode_graph_ed_with_stats, encode_graph_nd, encode_graph_nd_with_stats,
    EdgeEncoding, EncodeStats,
};

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, NodeId};

/// `(l, d⁻¹, d, d⁺¹)`: distance to the root, edges toward the root,
/// degree inside the sub-graph, and edges away from the root.
///
/// Ordering is lexicographic on the fields in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quadruplet {
    pub l: u32,
    pub d_minus: u32,
    pub d: u32,
    pub d_plus: u32,
}

impl Quadruplet {
    pub const fn new(l: u32, d_minus: u32, d: u32, d_plus: u32) -> Self {
        Self {
            l,
            d_minus,
            d,
            d_plus,
        }
    }

    /// Edges to members on the same level.
    pub fn d_zero(&self) -> u32 {
        self.d - self.d_minus - self.d_plus
    }

    pub(crate) fn from_counts(l: u32, counts: [u32; 3]) -> Self {
        Self::new(l, counts[0], counts[0] + counts[1] + counts[2], counts[2])
    }

    pub fn to_array(self) -> [u32; 4] {
        [self.l, self.d_minus, self.d, self.d_plus]
    }
}

impl From<(u32, u32, u32, u32)> for Quadruplet {
    fn from((l, a, d, b): (u32, u32, u32, u32)) -> Self {
        Self::new(l, a, d, b)
    }
}

/// Sorted `(item, frequency)` list with unique items and positive counts.
fn count_sorted<T: Ord + Copy>(mut items: Vec<T>) -> Vec<(T, usize)> {
    items.sort_unstable();
    let mut out: Vec<(T, usize)> = Vec::new();
    for it in items {
        match out.last_mut() {
            Some((last, c)) if *last == it => *c += 1,
            _ => out.push((it, 1)),
        }
    }
    out
}

/// Multiset of quadruplets of one ego-network.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadMultiset {
    pub root: NodeId,
    pub k: usize,
    entries: Vec<(Quadruplet, usize)>,
}

impl QuadMultiset {
    pub fn from_quads(root: NodeId, k: usize, quads: impl IntoIterator<Item = Quadruplet>) -> Self {
        Self {
            root,
            k,
            entries: count_sorted(quads.into_iter().collect()),
        }
    }

    pub fn from_counts(
        root: NodeId,
        k: usize,
        counts: impl IntoIterator<Item = (Quadruplet, usize)>,
    ) -> Self {
        let mut entries: Vec<_> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        entries.sort_unstable();
        let mut merged: Vec<(Quadruplet, usize)> = Vec::with_capacity(entries.len());
        for (q, c) in entries {
            match merged.last_mut() {
                Some((last, total)) if *last == q => *total += c,
                _ => merged.push((q, c)),
            }
        }
        Self {
            root,
            k,
            entries: merged,
        }
    }

    /// Entries in lexicographic quadruplet order.
    pub fn entries(&self) -> &[(Quadruplet, usize)] {
        &self.entries
    }

    pub fn get(&self, q: &Quadruplet) -> usize {
        self.entries
            .binary_search_by(|(e, _)| e.cmp(q))
            .map_or(0, |i| self.entries[i].1)
    }

    /// Number of ego-network members.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    /// Twice the number of ego-network edges.
    pub fn degree_mass(&self) -> usize {
        self.entries.iter().map(|(q, c)| q.d as usize * c).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(|(q, _)| q.d as usize).max().unwrap_or(0)
    }
}

/// Unordered pair of endpoint views of one intersection member, stored
/// with the smaller quadruplet first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymTuple(pub Quadruplet, pub Quadruplet);

impl SymTuple {
    pub fn new(a: Quadruplet, b: Quadruplet) -> Self {
        if a <= b {
            Self(a, b)
        } else {
            Self(b, a)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeTupleMultiset {
    pub edge: EdgeId,
    pub k: usize,
    entries: Vec<(SymTuple, usize)>,
}

impl EdgeTupleMultiset {
    pub fn from_tuples(edge: EdgeId, k: usize, tuples: impl IntoIterator<Item = SymTuple>) -> Self {
        Self {
            edge,
            k,
            entries: count_sorted(tuples.into_iter().collect()),
        }
    }

    pub fn entries(&self) -> &[(SymTuple, usize)] {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    /// Sum of member degrees inside the intersection; twice its edge count.
    pub fn degree_mass(&self) -> usize {
        self.entries.iter().map(|(t, c)| t.0.d as usize * c).sum()
    }
}
