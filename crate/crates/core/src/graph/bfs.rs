use std::collections::BTreeMap;

use super::{Graph, NodeId};
use crate::error::Result;

/// Reusable depth-bounded BFS state.
///
/// Membership is tracked with epoch stamps so a single allocation serves
/// any number of roots. `tree_edges` counts the edges the search follows to
/// discover a new node, summed over all runs since the last reset.
#[derive(Debug, Clone)]
pub struct BoundedBfs {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    epoch: u32,
    order: Vec<NodeId>,
    pub tree_edges: u64,
}

impl BoundedBfs {
    pub fn new(n: usize) -> Self {
        Self {
            stamp: vec![0; n],
            dist: vec![0; n],
            epoch: 0,
            order: Vec::new(),
            tree_edges: 0,
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.order.clear();
    }

    /// Explores the ball of radius `k` around `root`.
    pub fn run(&mut self, g: &Graph, root: NodeId, k: usize) {
        self.run_within(g, root, k, |_| true);
    }

    /// Like [`BoundedBfs::run`] but only enters nodes accepted by `allow`.
    /// `root` is always a member.
    pub fn run_within(
        &mut self,
        g: &Graph,
        root: NodeId,
        k: usize,
        allow: impl Fn(NodeId) -> bool,
    ) {
        self.next_epoch();
        self.stamp[root] = self.epoch;
        self.dist[root] = 0;
        self.order.push(root);
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            let du = self.dist[u];
            if du as usize >= k {
                // Levels are non-decreasing in `order`.
                break;
            }
            for &w in g.neighbors(u) {
                if self.stamp[w] != self.epoch && allow(w) {
                    self.stamp[w] = self.epoch;
                    self.dist[w] = du + 1;
                    self.order.push(w);
                    self.tree_edges += 1;
                }
            }
        }
    }

    #[inline]
    pub fn contains(&self, node: NodeId) -> bool {
        self.stamp[node] == self.epoch
    }

    #[inline]
    pub fn distance(&self, node: NodeId) -> Option<usize> {
        self.contains(node).then(|| self.dist[node] as usize)
    }

    /// Distance of a known member, unchecked against the stamp.
    #[inline]
    pub(crate) fn member_distance(&self, node: NodeId) -> u32 {
        debug_assert!(self.contains(node));
        self.dist[node]
    }

    /// Members of the last run in BFS order (non-decreasing distance).
    pub fn members(&self) -> &[NodeId] {
        &self.order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMap {
    pub root: NodeId,
    pub k: usize,
    pub dist: BTreeMap<NodeId, usize>,
}

impl LevelMap {
    /// Nodes at exactly distance `l`, ascending.
    pub fn shell(&self, l: usize) -> Vec<NodeId> {
        self.dist
            .iter()
            .filter(|&(_, &d)| d == l)
            .map(|(&u, _)| u)
            .collect()
    }
}

pub fn bfs_levels(g: &Graph, root: NodeId, k: usize) -> Result<LevelMap> {
    g.check_node(root)?;
    let mut bfs = BoundedBfs::new(g.node_count());
    bfs.run(g, root, k);
    let dist = bfs
        .members()
        .iter()
        .map(|&u| (u, bfs.member_distance(u) as usize))
        .collect();
    Ok(LevelMap { root, k, dist })
}

/// Induced `k`-hop ego-network of a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgoNet {
    pub root: NodeId,
    pub k: usize,
    /// `(node, distance to root)`, ascending by node.
    pub nodes: Vec<(NodeId, usize)>,
    /// Induced edges as `(u, v)` with `u < v`, ascending.
    pub edges: Vec<(NodeId, NodeId)>,
}

impl EgoNet {
    pub fn degree_multiset(&self) -> BTreeMap<usize, usize> {
        let mut deg: BTreeMap<NodeId, usize> = self.nodes.iter().map(|&(u, _)| (u, 0)).collect();
        for &(a, b) in &self.edges {
            *deg.get_mut(&a).unwrap() += 1;
            *deg.get_mut(&b).unwrap() += 1;
        }
        let mut hist = BTreeMap::new();
        for d in deg.into_values() {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }
}

pub fn ego_subgraph(g: &Graph, root: NodeId, k: usize) -> Result<EgoNet> {
    g.check_node(root)?;
    let mut bfs = BoundedBfs::new(g.node_count());
    bfs.run(g, root, k);
    let mut nodes: Vec<_> = bfs
        .members()
        .iter()
        .map(|&u| (u, bfs.member_distance(u) as usize))
        .collect();
    nodes.sort_unstable();
    let mut edges = Vec::new();
    for &(u, _) in &nodes {
        for &w in g.neighbors(u) {
            if u < w && bfs.contains(w) {
                edges.push((u, w));
            }
        }
    }
    Ok(EgoNet {
        root,
        k,
        nodes,
        edges,
    })
}

/// Largest finite eccentricity over all nodes; 0 for graphs without edges.
pub fn diameter(g: &Graph) -> usize {
    let n = g.node_count();
    let mut bfs = BoundedBfs::new(n);
    (0..n)
        .map(|u| {
            bfs.run(g, u, n);
            bfs.members()
                .last()
                .map_or(0, |&w| bfs.member_distance(w) as usize)
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn cycle_levels() {
        let c6 = generate(Family::Cycle { n: 6 }).unwrap();
        let levels = bfs_levels(&c6, 0, 2).unwrap();
        let expected: BTreeMap<_, _> = [(0, 0), (1, 1), (5, 1), (2, 2), (4, 2)].into();
        assert_eq!(levels.dist, expected);
        assert_eq!(levels.shell(1), vec![1, 5]);
    }

    #[test]
    fn zero_depth_is_root_only() {
        let c6 = generate(Family::Cycle { n: 6 }).unwrap();
        let levels = bfs_levels(&c6, 3, 0).unwrap();
        assert_eq!(levels.dist, [(3, 0)].into());
    }

    #[test]
    fn depth_beyond_diameter() {
        let k3 = generate(Family::Cycle { n: 3 }).unwrap();
        let levels = bfs_levels(&k3, 0, 5).unwrap();
        assert_eq!(levels.dist, [(0, 0), (1, 1), (2, 1)].into());
    }

    #[test]
    fn out_of_range_root() {
        let g = Graph::empty(2);
        assert!(bfs_levels(&g, 2, 1).is_err());
        assert!(ego_subgraph(&g, 5, 1).is_err());
    }

    #[test]
    fn ego_of_cycle() {
        let c6 = generate(Family::Cycle { n: 6 }).unwrap();
        let ego = ego_subgraph(&c6, 0, 2).unwrap();
        assert_eq!(ego.nodes.len(), 5);
        assert_eq!(ego.edges, vec![(0, 1), (0, 5), (1, 2), (4, 5)]);
    }

    #[test]
    fn ego_of_isolated_node() {
        let g = Graph::from_edge_list(3, &[(1, 2)]).unwrap();
        let ego = ego_subgraph(&g, 0, 4).unwrap();
        assert_eq!(ego.nodes, vec![(0, 0)]);
        assert!(ego.edges.is_empty());
    }

    #[test]
    fn srg_one_hop_ego_nets() {
        for family in [Family::Rook { n: 4 }, Family::Shrikhande] {
            let g = generate(family).unwrap();
            for v in 0..16 {
                let ego = ego_subgraph(&g, v, 1).unwrap();
                assert_eq!(ego.nodes.len(), 7);
                assert_eq!(ego.edges.len(), 12);
                assert_eq!(ego.degree_multiset(), [(3, 6), (6, 1)].into());
            }
        }
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&generate(Family::Cycle { n: 6 }).unwrap()), 3);
        assert_eq!(diameter(&generate(Family::Rook { n: 4 }).unwrap()), 2);
        assert_eq!(diameter(&Graph::empty(4)), 0);
    }

    #[test]
    fn epoch_wraparound_resets_stamps() {
        let c6 = generate(Family::Cycle { n: 6 }).unwrap();
        let mut bfs = BoundedBfs::new(6);
        bfs.epoch = u32::MAX - 1;
        bfs.run(&c6, 0, 1);
        bfs.run(&c6, 3, 1);
        let mut members = bfs.members().to_vec();
        members.sort_unstable();
        assert_eq!(members, vec![2, 3, 4]);
        assert!(!bfs.contains(0));
    }
}
