use rayon::prelude::*;

use super::{EdgeEncoder, EdgeTupleMultiset, NodeEncoder, QuadMultiset};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Work counters aggregated over every root of one encoding run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncodeStats {
    /// BFS tree edges followed, summed over all roots.
    pub edges_traversed: u64,
}

/// Output of the edge-centric driver: every node's ND multiset followed by
/// every edge's ED multiset, both index-aligned with the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeEncoding {
    pub nodes: Vec<QuadMultiset>,
    pub edges: Vec<EdgeTupleMultiset>,
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    if threads == 0 {
        return Err(Error::InvalidParams("threads must be >= 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))
}

/// Runs `work` on `len` items split into contiguous chunks, one chunk per
/// task, and concatenates the per-chunk results in index order.
fn chunked<T: Send>(
    len: usize,
    threads: usize,
    work: impl Fn(std::ops::Range<usize>) -> Result<(Vec<T>, u64)> + Sync,
) -> Result<(Vec<T>, u64)> {
    if threads == 1 {
        return work(0..len);
    }
    let pool = pool(threads)?;
    if len == 0 {
        return Ok((Vec::new(), 0));
    }
    // A few chunks per worker smooths out skewed ball sizes without
    // giving up contiguous ranges.
    let chunk = len.div_ceil(threads * 4).max(1);
    let ranges: Vec<_> = (0..len)
        .step_by(chunk)
        .map(|s| s..(s + chunk).min(len))
        .collect();
    let parts: Vec<Result<(Vec<T>, u64)>> =
        pool.install(|| ranges.into_par_iter().map(&work).collect());
    let mut out = Vec::with_capacity(len);
    let mut traversed = 0;
    for part in parts {
        let (items, t) = part?;
        out.extend(items);
        traversed += t;
    }
    Ok((out, traversed))
}

pub fn encode_graph_nd_with_stats(
    g: &Graph,
    k: usize,
    threads: usize,
) -> Result<(Vec<QuadMultiset>, EncodeStats)> {
    let (nodes, edges_traversed) = chunked(g.node_count(), threads, |range| {
        let mut enc = NodeEncoder::new(g, k);
        let items = range.map(|v| enc.encode(v)).collect::<Result<Vec<_>>>()?;
        Ok((items, enc.edges_traversed()))
    })?;
    Ok((nodes, EncodeStats { edges_traversed }))
}

pub fn encode_graph_nd(g: &Graph, k: usize, threads: usize) -> Result<Vec<QuadMultiset>> {
    encode_graph_nd_with_stats(g, k, threads).map(|(v, _)| v)
}

pub fn encode_graph_ed_with_stats(
    g: &Graph,
    k: usize,
    threads: usize,
) -> Result<(EdgeEncoding, EncodeStats)> {
    if k == 0 {
        return Err(Error::InvalidParams("edge-centric encoding needs k >= 1".into()));
    }
    let (nodes, nd) = encode_graph_nd_with_stats(g, k, threads)?;
    let (edges, ed) = chunked(g.edge_count(), threads, |range| {
        let mut enc = EdgeEncoder::new(g, k)?;
        let items = range.map(|id| enc.encode(id)).collect::<Result<Vec<_>>>()?;
        Ok((items, enc.edges_traversed()))
    })?;
    Ok((
        EdgeEncoding { nodes, edges },
        EncodeStats {
            edges_traversed: nd.edges_traversed + ed,
        },
    ))
}

pub fn encode_graph_ed(g: &Graph, k: usize, threads: usize) -> Result<EdgeEncoding> {
    encode_graph_ed_with_stats(g, k, threads).map(|(e, _)| e)
}
