//! Sparse vector views of quadruplet multisets and canonical signatures
//! for comparing whole graphs.
//!
//! The marginal layout keeps three slots (edges toward the root, absolute
//! degree, edges away from the root), each a `(k + 1) x (d_max + 1)` grid
//! of (distance, degree) cells:
//!
//! ```text
//! index = slot * (k + 1) * (d_max + 1) + l * (d_max + 1) + deg
//! ```
//!
//! The joint layout instead gives every possible quadruplet its own cell.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::encode::{
    encode_graph_ed, encode_graph_nd, EdgeTupleMultiset, QuadMultiset, Quadruplet, SymTuple,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Minus = 0,
    Abs = 1,
    Plus = 2,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::Minus, Slot::Abs, Slot::Plus];

    fn degree(self, q: &Quadruplet) -> u32 {
        match self {
            Slot::Minus => q.d_minus,
            Slot::Abs => q.d,
            Slot::Plus => q.d_plus,
        }
    }
}

/// Node-centric or edge-centric encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Nd,
    Ed,
}

fn cell(l: usize, deg: usize, k: usize, d_max: usize) -> Result<usize> {
    if l > k || deg > d_max {
        return Err(Error::OutOfLayout { l, deg, k, d_max });
    }
    Ok(l * (d_max + 1) + deg)
}

pub fn index_of(slot: Slot, l: usize, deg: usize, k: usize, d_max: usize) -> Result<usize> {
    Ok(slot as usize * (k + 1) * (d_max + 1) + cell(l, deg, k, d_max)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseVec {
    pub dim: usize,
    pub k: usize,
    pub d_max: usize,
    /// Slots present, in storage order. Empty for the joint layout.
    pub slots: Vec<Slot>,
    entries: Vec<(usize, u64)>,
}

impl SparseVec {
    pub(crate) fn from_pairs(
        dim: usize,
        k: usize,
        d_max: usize,
        slots: Vec<Slot>,
        mut pairs: Vec<(usize, u64)>,
    ) -> Self {
        pairs.sort_unstable();
        let mut entries: Vec<(usize, u64)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match entries.last_mut() {
                Some((j, total)) if *j == i => *total += c,
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|&(_, c)| c > 0);
        Self {
            dim,
            k,
            d_max,
            slots,
            entries,
        }
    }

    /// `(index, count)` pairs with strictly increasing indices.
    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> u64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map_or(0, |p| self.entries[p].1)
    }

    pub fn to_dense(&self) -> Vec<u64> {
        let mut out = vec![0; self.dim];
        for &(i, c) in &self.entries {
            out[i] = c;
        }
        out
    }

    /// Restriction of a marginal vector to one slot, re-indexed as a
    /// single-slot `(k + 1) x (d_max + 1)` grid.
    pub fn restrict(&self, slot: Slot) -> Option<SparseVec> {
        let pos = self.slots.iter().position(|&s| s == slot)?;
        let width = (self.k + 1) * (self.d_max + 1);
        let lo = pos * width;
        let pairs = self
            .entries
            .iter()
            .filter(|&&(i, _)| (lo..lo + width).contains(&i))
            .map(|&(i, c)| (i - lo, c))
            .collect();
        Some(Self::from_pairs(width, self.k, self.d_max, vec![slot], pairs))
    }

    /// Sum of counts in one slot's grid.
    pub fn slot_mass(&self, slot: Slot) -> u64 {
        self.restrict(slot)
            .map_or(0, |v| v.entries.iter().map(|&(_, c)| c).sum())
    }

    /// `node_id dim idx:count idx:count ...`
    pub fn to_line(&self, id: usize) -> String {
        let mut s = format!("{id} {}", self.dim);
        for &(i, c) in &self.entries {
            let _ = write!(s, " {i}:{c}");
        }
        s
    }
}

fn marginal(e: &QuadMultiset, k: usize, d_max: usize, slots: &[Slot]) -> Result<SparseVec> {
    let width = (k + 1) * (d_max + 1);
    let mut pairs = Vec::with_capacity(e.entries().len() * slots.len());
    for (q, f) in e.entries() {
        for (pos, &slot) in slots.iter().enumerate() {
            let c = cell(q.l as usize, slot.degree(q) as usize, k, d_max)?;
            pairs.push((pos * width + c, *f as u64));
        }
    }
    Ok(SparseVec::from_pairs(
        slots.len() * width,
        k,
        d_max,
        slots.to_vec(),
        pairs,
    ))
}

/// Three-slot marginal vector of dimension `3 (k + 1) (d_max + 1)`.
pub fn to_sparse_vector(e: &QuadMultiset, k: usize, d_max: usize) -> Result<SparseVec> {
    marginal(e, k, d_max, &Slot::ALL)
}

/// (distance, absolute degree) counts only.
pub fn to_igel_vector(e: &QuadMultiset, k: usize, d_max: usize) -> Result<SparseVec> {
    marginal(e, k, d_max, &[Slot::Abs])
}

/// Index of a quadruplet in the joint layout of dimension
/// `(k + 1) (d_max + 1)^3`.
pub fn joint_index(q: &Quadruplet, k: usize, d_max: usize) -> Result<usize> {
    let r = d_max + 1;
    let mut idx = cell(q.l as usize, q.d_minus as usize, k, d_max)?;
    for deg in [q.d, q.d_plus] {
        let deg = deg as usize;
        if deg > d_max {
            return Err(Error::OutOfLayout {
                l: q.l as usize,
                deg,
                k,
                d_max,
            });
        }
        idx = idx * r + deg;
    }
    Ok(idx)
}

/// One cell per distinct quadruplet; lossless for multisets that fit.
pub fn to_joint_vector(e: &QuadMultiset, k: usize, d_max: usize) -> Result<SparseVec> {
    let pairs = e
        .entries()
        .iter()
        .map(|(q, f)| Ok((joint_index(q, k, d_max)?, *f as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseVec::from_pairs(
        (k + 1) * (d_max + 1).pow(3),
        k,
        d_max,
        Vec::new(),
        pairs,
    ))
}

/// Parses a `node_id dim idx:count ...` line into `(node_id, dim, entries)`.
pub fn parse_sparse_line(line: &str) -> Result<(usize, usize, Vec<(usize, u64)>)> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    let mut it = line.split_whitespace();
    let mut num = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| bad(format!("missing {what}")))?;
        tok.parse().map_err(|_| bad(format!("bad {what} {tok:?}")))
    };
    let id = num("node id")?;
    let dim = num("dimension")?;
    let mut entries = Vec::new();
    for tok in it {
        let (i, c) = tok
            .split_once(':')
            .ok_or_else(|| bad(format!("expected idx:count, got {tok:?}")))?;
        let i: usize = i.parse().map_err(|_| bad(format!("bad index {i:?}")))?;
        let c: u64 = c.parse().map_err(|_| bad(format!("bad count {c:?}")))?;
        if i >= dim || c == 0 || entries.last().is_some_and(|&(j, _)| j >= i) {
            return Err(bad(format!("entry {tok:?} breaks the sparse format")));
        }
        entries.push((i, c));
    }
    Ok((id, dim, entries))
}

/// Sorted `(item, frequency)` list; two multisets are equal iff their
/// canonical forms are.
pub trait CanonicalForm {
    type Item: Ord + Clone;
    fn canonical_form(&self) -> Vec<(Self::Item, usize)>;
}

impl CanonicalForm for QuadMultiset {
    type Item = Quadruplet;
    fn canonical_form(&self) -> Vec<(Quadruplet, usize)> {
        self.entries().to_vec()
    }
}

impl CanonicalForm for EdgeTupleMultiset {
    type Item = SymTuple;
    fn canonical_form(&self) -> Vec<(SymTuple, usize)> {
        self.entries().to_vec()
    }
}

pub fn canonical_form<T: CanonicalForm>(e: &T) -> Vec<(T::Item, usize)> {
    e.canonical_form()
}

/// Label-free summary of a whole graph: the sorted list of every node's
/// canonical form and, in edge-centric mode, every edge's.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphSignature {
    pub k: usize,
    pub mode: Mode,
    pub nodes: Vec<Vec<(Quadruplet, usize)>>,
    pub edges: Vec<Vec<(SymTuple, usize)>>,
}

impl GraphSignature {
    pub fn len(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn graph_signature(g: &Graph, k: usize, mode: Mode) -> Result<GraphSignature> {
    graph_signature_with_threads(g, k, mode, 1)
}

pub fn graph_signature_with_threads(
    g: &Graph,
    k: usize,
    mode: Mode,
    threads: usize,
) -> Result<GraphSignature> {
    let (nodes, edges) = match mode {
        Mode::Nd => (encode_graph_nd(g, k, threads)?, Vec::new()),
        Mode::Ed => {
            let enc = encode_graph_ed(g, k, threads)?;
            (enc.nodes, enc.edges)
        }
    };
    let mut nodes: Vec<_> = nodes.iter().map(canonical_form).collect();
    let mut edges: Vec<_> = edges.iter().map(canonical_form).collect();
    nodes.sort_unstable();
    edges.sort_unstable();
    Ok(GraphSignature {
        k,
        mode,
        nodes,
        edges,
    })
}
