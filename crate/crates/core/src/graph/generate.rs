//! Deterministic generators for the graph families used in tests and
//! benchmarks. Random families take an explicit seed and always produce
//! the same edge list for the same parameters.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

pub const DEFAULT_REGULAR_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `n x n` rook's graph: cells sharing a row or a column are adjacent.
    Rook { n: usize },
    /// Cayley graph on Z4 x Z4 with connection set ±(1,0), ±(0,1), ±(1,1).
    Shrikhande,
    Cycle { n: usize },
    /// `t` vertex-disjoint triangles.
    DisjointTriangles { t: usize },
    RandomRegular { n: usize, d: usize, seed: u64 },
    BarabasiAlbert { n: usize, m_min: usize, seed: u64 },
}

pub fn generate(family: Family) -> Result<Graph> {
    match family {
        Family::Rook { n } => Ok(rook(n)),
        Family::Shrikhande => Ok(shrikhande()),
        Family::Cycle { n } => cycle(n),
        Family::DisjointTriangles { t } => Ok(disjoint_triangles(t)),
        Family::RandomRegular { n, d, seed } => {
            random_regular(n, d, seed, DEFAULT_REGULAR_RETRIES)
        }
        Family::BarabasiAlbert { n, m_min, seed } => barabasi_albert(n, m_min, seed),
    }
}

fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
    let mut edges: Vec<_> = pairs.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    edges.dedup();
    Graph::from_canonical(n, edges)
}

pub fn rook(n: usize) -> Graph {
    let cell = |r: usize, c: usize| r * n + c;
    let mut pairs = Vec::new();
    for r in 0..n {
        for c in 0..n {
            for c2 in c + 1..n {
                pairs.push((cell(r, c), cell(r, c2)));
            }
            for r2 in r + 1..n {
                pairs.push((cell(r, c), cell(r2, c)));
            }
        }
    }
    from_pairs(n * n, pairs)
}

pub fn shrikhande() -> Graph {
    const STEPS: [(usize, usize); 3] = [(1, 0), (0, 1), (1, 1)];
    let cell = |a: usize, b: usize| 4 * (a % 4) + (b % 4);
    let mut pairs = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            // The +s half of each ±s pair; the -s half is the reverse edge.
            for (da, db) in STEPS {
                pairs.push((cell(a, b), cell(a + da, b + db)));
            }
        }
    }
    from_pairs(16, pairs)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("cycle needs n >= 3, got {n}")));
    }
    Ok(from_pairs(n, (0..n).map(|i| (i, (i + 1) % n))))
}

pub fn disjoint_triangles(t: usize) -> Graph {
    from_pairs(
        3 * t,
        (0..t).flat_map(|i| {
            let b = 3 * i;
            [(b, b + 1), (b + 1, b + 2), (b, b + 2)]
        }),
    )
}

/// Uniform-ish random `d`-regular graph from the pairing model.
///
/// Stubs are shuffled and paired; pairs that would form a loop or a
/// repeated edge are returned to the pool and re-shuffled. An attempt is
/// abandoned when the leftover stubs admit no valid pair at all, and up to
/// `retries` attempts are made.
pub fn random_regular(n: usize, d: usize, seed: u64, retries: usize) -> Result<Graph> {
    if (n * d) % 2 != 0 {
        return Err(Error::InvalidParams(format!("n*d must be even (n={n}, d={d})")));
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::InvalidParams(format!("degree {d} needs more than {n} nodes")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retries.max(1) {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            return Ok(from_pairs(n, edges));
        }
    }
    Err(Error::GenerationFailure {
        attempts: retries.max(1),
    })
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(NodeId, NodeId)>> {
    let mut edges: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(n * d / 2);
    let mut stubs: Vec<NodeId> = (0..n).flat_map(|u| std::iter::repeat(u).take(d)).collect();
    while !stubs.is_empty() {
        let mut rejected: BTreeMap<NodeId, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && edges.insert((a, b)) {
                continue;
            }
            *rejected.entry(a).or_default() += 1;
            *rejected.entry(b).or_default() += 1;
        }
        if !pairing_can_progress(&edges, &rejected) {
            return None;
        }
        stubs = rejected
            .into_iter()
            .flat_map(|(u, c)| std::iter::repeat(u).take(c))
            .collect();
    }
    let mut out: Vec<_> = edges.into_iter().collect();
    out.sort_unstable();
    Some(out)
}

fn pairing_can_progress(
    edges: &HashSet<(NodeId, NodeId)>,
    pending: &BTreeMap<NodeId, usize>,
) -> bool {
    if pending.is_empty() {
        return true;
    }
    let nodes: Vec<_> = pending.keys().copied().collect();
    nodes.iter().enumerate().any(|(i, &a)| {
        nodes[i + 1..]
            .iter()
            .any(|&b| !edges.contains(&(a, b)))
    })
}

/// Preferential attachment grown from a star on `m_min + 1` nodes.
///
/// Each new node attaches to `m_min` distinct existing nodes drawn from the
/// list of all edge endpoints, so selection probability is proportional to
/// degree.
pub fn barabasi_albert(n: usize, m_min: usize, seed: u64) -> Result<Graph> {
    if m_min == 0 || n < m_min + 1 {
        return Err(Error::InvalidParams(format!(
            "barabasi-albert needs m_min >= 1 and n >= m_min + 1 (n={n}, m_min={m_min})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = (1..=m_min).map(|v| (0, v)).collect();
    let mut endpoints: Vec<NodeId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut targets = Vec::with_capacity(m_min);
    for v in m_min + 1..n {
        targets.clear();
        while targets.len() < m_min {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Ok(from_pairs(n, edges))
}

/// Erdős–Rényi `G(n, p)`; used as a source of small random test graphs.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_canonical(n, pairs)
}
