//! Line-delimited output records for `elene encode`.

use std::io::Write;

use anyhow::Result;
use elene::encode::{
    encode_graph_ed_with_stats, encode_graph_nd_with_stats, EdgeTupleMultiset, QuadMultiset, Quadruplet, SymTuple,
};
use elene::vectorize::{to_igel_vector, to_sparse_vector};
use elene::{Graph, Mode};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// JSON record with the raw quadruplet counts.
    Quads,
    /// Three-slot sparse vector line.
    Vec,
    /// (distance, degree) sparse vector line.
    Igel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub node: usize,
    pub k: usize,
    pub mode: Mode,
    /// `[l, d⁻¹, d, d⁺¹, count]`
    pub quads: Vec<[u32; 5]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    pub k: usize,
    pub mode: Mode,
    /// `[[l, d⁻¹, d, d⁺¹], [l, d⁻¹, d, d⁺¹], count]` with the smaller
    /// quadruplet first.
    pub pairs: Vec<([u32; 4], [u32; 4], usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Record {
    Node(NodeRecord),
    Edge(EdgeRecord),
}

impl NodeRecord {
    pub fn new(e: &QuadMultiset, mode: Mode) -> Self {
        Self {
            node: e.root,
            k: e.k,
            mode,
            quads: e
                .entries()
                .iter()
                .map(|(q, c)| {
                    let [l, a, d, b] = q.to_array();
                    [l, a, d, b, *c as u32]
                })
                .collect(),
        }
    }

    pub fn to_multiset(&self) -> QuadMultiset {
        QuadMultiset::from_counts(
            self.node,
            self.k,
            self.quads
                .iter()
                .map(|&[l, a, d, b, c]| (Quadruplet::new(l, a, d, b), c as usize)),
        )
    }
}

impl EdgeRecord {
    pub fn new(g: &Graph, e: &EdgeTupleMultiset) -> Self {
        let (u, v) = g.edges()[e.edge];
        Self {
            edge: e.edge,
            u,
            v,
            k: e.k,
            mode: Mode::Ed,
            pairs: e
                .entries()
                .iter()
                .map(|(t, c)| (t.0.to_array(), t.1.to_array(), *c))
                .collect(),
        }
    }

    pub fn to_multiset(&self) -> EdgeTupleMultiset {
        let quad = |[l, a, d, b]: [u32; 4]| Quadruplet::new(l, a, d, b);
        EdgeTupleMultiset::from_tuples(
            self.edge,
            self.k,
            self.pairs
                .iter()
                .flat_map(|&(x, y, c)| std::iter::repeat_n(SymTuple::new(quad(x), quad(y)), c)),
        )
    }
}

/// Encodings of every node (and every edge in edge-centric mode) of one
/// graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub mode: Mode,
    pub k: usize,
    pub nodes: Vec<QuadMultiset>,
    pub edges: Vec<EdgeTupleMultiset>,
    pub edges_traversed: u64,
}

pub fn encode(g: &Graph, k: usize, mode: Mode, threads: usize) -> Result<Encoded> {
    let (nodes, edges, stats) = match mode {
        Mode::Nd => {
            let (nodes, stats) = encode_graph_nd_with_stats(g, k, threads)?;
            (nodes, Vec::new(), stats)
        }
        Mode::Ed => {
            let (enc, stats) = encode_graph_ed_with_stats(g, k, threads)?;
            (enc.nodes, enc.edges, stats)
        }
    };
    Ok(Encoded {
        mode,
        k,
        nodes,
        edges,
        edges_traversed: stats.edges_traversed,
    })
}

/// Writes one line per node, then one JSON line per edge in edge-centric
/// mode. Node lines are JSON for [`Format::Quads`] and sparse vector lines
/// otherwise; vectors use `d_max`, defaulting to the graph's maximum degree.
pub fn write_records(
    g: &Graph,
    enc: &Encoded,
    format: Format,
    d_max: Option<usize>,
    mut out: impl Write,
) -> Result<()> {
    let d_max = d_max.unwrap_or_else(|| g.max_degree());
    for e in &enc.nodes {
        match format {
            Format::Quads => {
                serde_json::to_writer(&mut out, &NodeRecord::new(e, enc.mode))?;
                writeln!(out)?;
            }
            Format::Vec => writeln!(out, "{}", to_sparse_vector(e, enc.k, d_max)?.to_line(e.root))?,
            Format::Igel => writeln!(out, "{}", to_igel_vector(e, enc.k, d_max)?.to_line(e.root))?,
        }
    }
    for e in &enc.edges {
        serde_json::to_writer(&mut out, &EdgeRecord::new(g, e))?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Sparse-vector nonzeros over all nodes plus distinct tuples over all
/// edges.
pub fn nonzeros(g: &Graph, enc: &Encoded) -> Result<u64> {
    let d_max = g.max_degree();
    let mut total = 0;
    for e in &enc.nodes {
        total += to_sparse_vector(e, enc.k, d_max)?.nonzeros() as u64;
    }
    total += enc.edges.iter().map(|e| e.entries().len() as u64).sum::<u64>();
    Ok(total)
}
