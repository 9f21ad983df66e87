//! Color refinement, strongly regular graphs and pairwise
//! distinguishability.

use std::collections::BTreeMap;

use crate::encode::{QuadMultiset, Quadruplet};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::vectorize::{graph_signature, Mode, Slot, SparseVec};

/// Stable 1-WL coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WLColoring {
    /// Color id per node. Ids are ranks of the sorted refinement signatures,
    /// so they do not depend on node labels.
    pub colors: Vec<usize>,
    /// Color id -> number of nodes.
    pub histogram: BTreeMap<usize, usize>,
    /// Refinement rounds that split at least one class.
    pub rounds: usize,
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&c| c + 1)
}

fn refine_once(g: &Graph, colors: &[usize]) -> Vec<usize> {
    let sigs: Vec<(usize, Vec<usize>)> = (0..g.node_count())
        .map(|v| {
            let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
            nb.sort_unstable();
            (colors[v], nb)
        })
        .collect();
    let mut distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
    distinct.sort_unstable();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(&s).expect("signature present"))
        .collect()
}

fn refine(g: &Graph, max_rounds: usize) -> WLColoring {
    let mut colors = vec![0; g.node_count()];
    let mut rounds = 0;
    while rounds < max_rounds {
        let next = refine_once(g, &colors);
        // Refinement only ever splits classes, so an unchanged class count
        // means an unchanged partition.
        if class_count(&next) == class_count(&colors) {
            break;
        }
        colors = next;
        rounds += 1;
    }
    let mut histogram = BTreeMap::new();
    for &c in &colors {
        *histogram.entry(c).or_default() += 1;
    }
    WLColoring {
        colors,
        histogram,
        rounds,
    }
}

/// Color refinement from uniform initial colors, for at most `max_rounds`
/// rounds (`0` means `n`).
pub fn wl1_refine(g: &Graph, max_rounds: usize) -> WLColoring {
    let cap = if max_rounds == 0 { g.node_count() } else { max_rounds };
    refine(g, cap)
}

fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let off = g1.node_count();
    let edges: Vec<_> = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|&(u, v)| (u + off, v + off)))
        .collect();
    Graph::from_edge_list(off + g2.node_count(), &edges).expect("union of simple graphs")
}

/// True iff 1-WL tells the graphs apart. Both graphs are refined together
/// as one disjoint union so their color ids share a palette.
pub fn wl1_distinguish(g1: &Graph, g2: &Graph) -> bool {
    if g1.node_count() != g2.node_count() {
        return true;
    }
    let u = disjoint_union(g1, g2);
    let wl = refine(&u, u.node_count().max(1));
    let split = g1.node_count();
    let hist = |nodes: &[usize]| {
        let mut h = BTreeMap::new();
        for &c in nodes {
            *h.entry(c).or_insert(0usize) += 1;
        }
        h
    };
    hist(&wl.colors[..split]) != hist(&wl.colors[split..])
}

/// True iff the ego-network signatures of the graphs differ.
pub fn elene_distinguish(g1: &Graph, g2: &Graph, k: usize, mode: Mode) -> Result<bool> {
    Ok(graph_signature(g1, k, mode)? != graph_signature(g2, k, mode)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SrgParams {
    pub n: usize,
    pub d: usize,
    pub lambda: usize,
    pub mu: usize,
}

fn common_neighbors(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Extracts `(n, d, λ, μ)` by scanning every vertex pair. λ (μ) is reported
/// as 0 when the graph has no adjacent (non-adjacent) pair.
///
/// The error names the first pair, in lexicographic order, whose degree or
/// common-neighbour count disagrees with the parameters seen so far.
pub fn check_srg(g: &Graph) -> Result<SrgParams> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 nodes, got {n}")));
    }
    let d = g.degree(0);
    if let Some(v) = (1..n).find(|&v| g.degree(v) != d) {
        return Err(Error::NotStronglyRegular(0, v));
    }
    let (mut lambda, mut mu) = (None, None);
    for u in 0..n {
        for v in u + 1..n {
            let c = common_neighbors(g.neighbors(u), g.neighbors(v));
            let slot = if g.has_edge(u, v) { &mut lambda } else { &mut mu };
            if *slot.get_or_insert(c) != c {
                return Err(Error::NotStronglyRegular(u, v));
            }
        }
    }
    Ok(SrgParams {
        n,
        d,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    })
}

fn validate(p: &SrgParams) -> Result<()> {
    let invalid = |why: &str| Err(Error::InvalidParams(format!("{p:?}: {why}")));
    if p.d == 0 {
        return invalid("d must be >= 1");
    }
    if p.d >= p.n {
        return invalid("d must be < n");
    }
    if p.lambda + 1 > p.d {
        return invalid("d - lambda - 1 < 0");
    }
    let far = p.n - p.d - 1;
    if far > 0 && (p.mu == 0 || p.mu > p.d) {
        return invalid("mu must lie in 1..=d when non-adjacent pairs exist");
    }
    // Edges leaving the first shell are exactly the edges entering the
    // second.
    if p.d * (p.d - p.lambda - 1) != far * p.mu {
        return invalid("d (d - lambda - 1) != (n - d - 1) mu");
    }
    Ok(())
}

/// Node-centric multiset at depth 2 shared by every vertex of a strongly
/// regular graph with parameters `p`. The root field is 0.
///
/// A vertex at distance 2 has μ neighbours in the first shell, so its
/// quadruplet is `(2, μ, d, 0)`.
pub fn srg_closed_form_nd(p: SrgParams) -> Result<QuadMultiset> {
    validate(&p)?;
    let (n, d, lambda, mu) = (p.n as u32, p.d as u32, p.lambda as u32, p.mu as u32);
    Ok(QuadMultiset::from_counts(
        0,
        2,
        [
            (Quadruplet::new(0, 0, d, d), 1),
            (Quadruplet::new(1, 1, d, d - lambda - 1), p.d),
            (Quadruplet::new(2, mu, d, 0), (n - d - 1) as usize),
        ],
    ))
}

/// (distance, degree) vector shared by every vertex of a strongly regular
/// graph, for `k` in `{1, 2}`.
pub fn srg_closed_form_igel(p: SrgParams, k: usize, d_max: usize) -> Result<SparseVec> {
    validate(&p)?;
    let cells: Vec<(usize, usize, u64)> = match k {
        1 => vec![(0, p.d, 1), (1, 1 + p.lambda, p.d as u64)],
        2 => vec![
            (0, p.d, 1),
            (1, p.d, p.d as u64),
            (2, p.d, (p.n - p.d - 1) as u64),
        ],
        _ => return Err(Error::InvalidParams(format!("closed form needs k in {{1, 2}}, got {k}"))),
    };
    let width = (k + 1) * (d_max + 1);
    let mut pairs = Vec::new();
    for (l, deg, c) in cells {
        if deg > d_max {
            return Err(Error::OutOfLayout { l, deg, k, d_max });
        }
        pairs.push((l * (d_max + 1) + deg, c));
    }
    Ok(SparseVec::from_pairs(width, k, d_max, vec![Slot::Abs], pairs))
}
