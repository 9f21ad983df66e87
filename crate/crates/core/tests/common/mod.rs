//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use elene::encode::{Quadruplet, SymTuple};
use elene::Graph;

pub const INF: usize = usize::MAX / 4;

/// Floyd–Warshall over the sub-graph induced by `keep`; distances to or
/// from dropped nodes are `INF`.
pub fn all_pairs_within(g: &Graph, keep: &[bool]) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut d = vec![vec![INF; n]; n];
    for v in 0..n {
        if keep[v] {
            d[v][v] = 0;
        }
    }
    for &(a, b) in g.edges() {
        if keep[a] && keep[b] {
            d[a][b] = 1;
            d[b][a] = 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn all_pairs(g: &Graph) -> Vec<Vec<usize>> {
    all_pairs_within(g, &vec![true; g.node_count()])
}

fn counts<T: Ord>(items: Vec<T>) -> Vec<(T, usize)> {
    let mut m = BTreeMap::new();
    for x in items {
        *m.entry(x).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

/// Quadruplet of `w` given distances `dist` from some root: every edge of
/// `w` to another member is sorted by how the neighbor's distance compares.
fn classify(g: &Graph, member: &[bool], dist: &[usize], w: usize, k: usize) -> Quadruplet {
    let level = |x: usize| dist[x].min(k + 1) as i64;
    let (mut toward, mut same, mut away) = (0, 0, 0);
    for &(a, b) in g.edges() {
        let other = if a == w {
            b
        } else if b == w {
            a
        } else {
            continue;
        };
        if !member[other] {
            continue;
        }
        match level(other) - level(w) {
            -1 => toward += 1,
            0 => same += 1,
            1 => away += 1,
            gap => panic!("adjacent members {gap} levels apart"),
        }
    }
    Quadruplet::new(level(w) as u32, toward, toward + same + away, away)
}

/// Node-centric encoding of `v` from all-pairs distances.
pub fn nd_oracle(g: &Graph, v: usize, k: usize) -> Vec<(Quadruplet, usize)> {
    let d = all_pairs(g);
    nd_oracle_with(g, &d, v, k)
}

pub fn nd_oracle_with(g: &Graph, d: &[Vec<usize>], v: usize, k: usize) -> Vec<(Quadruplet, usize)> {
    let member: Vec<bool> = (0..g.node_count()).map(|u| d[v][u] <= k).collect();
    let quads = (0..g.node_count())
        .filter(|&u| member[u])
        .map(|u| classify(g, &member, &d[v], u, k))
        .collect();
    counts(quads)
}

/// Edge-centric encoding of `<u, v>`: members of both k-balls, each seen
/// from `u` and from `v` with distances inside the induced intersection.
pub fn ed_oracle(g: &Graph, u: usize, v: usize, k: usize) -> Vec<(SymTuple, usize)> {
    let d = all_pairs(g);
    let member: Vec<bool> = (0..g.node_count()).map(|w| d[u][w] <= k && d[v][w] <= k).collect();
    let inner = all_pairs_within(g, &member);
    let tuples = (0..g.node_count())
        .filter(|&w| member[w])
        .map(|w| {
            SymTuple::new(
                classify(g, &member, &inner[u], w, k),
                classify(g, &member, &inner[v], w, k),
            )
        })
        .collect();
    counts(tuples)
}

/// Exact isomorphism test by backtracking with degree pruning.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> bool {
    let n = g1.node_count();
    if n != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let mut d1: Vec<usize> = (0..n).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    let (s1, s2) = (d1.clone(), d2.clone());
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(s1[v]));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        order: &[usize],
        g1: &Graph,
        g2: &Graph,
        s1: &[usize],
        s2: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let a = order[i];
        for b in 0..g2.node_count() {
            if used[b] || s1[a] != s2[b] {
                continue;
            }
            let consistent = order[..i]
                .iter()
                .all(|&x| g1.has_edge(a, x) == g2.has_edge(b, map[x]));
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if extend(i + 1, order, g1, g2, s1, s2, map, used) {
                return true;
            }
            used[b] = false;
            map[a] = usize::MAX;
        }
        false
    }
    extend(0, &order, g1, g2, &s1, &s2, &mut map, &mut used)
}

/// Deterministic permutation of `0..n` from a seed.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    p
}
