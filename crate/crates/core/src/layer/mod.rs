//! Learnable ego-network layer.
//!
//! For every root `v`, each member `u` of the k-ball emits a message from
//! `[x_v, x_u, Emb(u|v)]`; in edge-centric mode every ego-network edge
//! `<a, b>` also emits one from `[x_v, e_ab, x_a * x_b, Emb(a,b|v)]`. The
//! pooled messages feed a root map whose output is added to `x_v` through
//! the gate `gamma_nd`. Each edge additionally pools the messages it emitted
//! in every ego-network containing it and updates `e_ab` through
//! `gamma_ed`.
//!
//! Backward passes are exact and analytic. Work is split into fixed-size
//! blocks of roots and partial results are reduced in block order, so
//! outputs do not depend on the number of worker threads.

mod construct;
mod dense;
mod forward;
mod io;
mod params;

pub use construct::{build_spnn_equivalent, histogram_probe, recover_histogram, spnn_forward};
pub use dense::{Activation, Dense, Mlp};
pub use forward::{grad_check, layer_forward, EleneLayer, Gradients};
pub use io::{read_features_csv, write_features_csv};
pub use params::{EleneLParams, LayerConfig, Pooling};

use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;

use crate::encode::{NodeEncoder, Quadruplet};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};

/// Roots per parallel work block.
pub(crate) const ROOT_BLOCK: usize = 64;

/// One root's ego-network as the layer consumes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEgo {
    /// Members with their quadruplets, root first.
    pub members: Vec<(NodeId, Quadruplet)>,
    /// Induced edges as `(edge id, member index, member index)`.
    pub edges: Vec<(EdgeId, usize, usize)>,
}

/// Ego-networks of every root of a graph at depth `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgoStructure {
    pub k: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub roots: Vec<RootEgo>,
    /// Number of ego-networks containing each edge.
    pub edge_roots: Vec<usize>,
    with_edges: bool,
}

impl EgoStructure {
    /// Node-centric structure: members only.
    pub fn nodes(g: &Graph, k: usize) -> Result<Self> {
        Self::build(g, k, false)
    }

    /// Edge-centric structure: members and induced edges.
    pub fn with_edges(g: &Graph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("edge-centric layers need k >= 1".into()));
        }
        Self::build(g, k, true)
    }

    pub fn has_edges(&self) -> bool {
        self.with_edges
    }

    fn build(g: &Graph, k: usize, with_edges: bool) -> Result<Self> {
        let n = g.node_count();
        let blocks: Vec<Result<Vec<RootEgo>>> = (0..n)
            .step_by(ROOT_BLOCK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|start| {
                let mut enc = NodeEncoder::new(g, k);
                let mut pos = vec![usize::MAX; n];
                (start..(start + ROOT_BLOCK).min(n))
                    .map(|v| {
                        let members = enc.member_quads(v)?;
                        let mut edges = Vec::new();
                        if with_edges {
                            for (i, &(u, _)) in members.iter().enumerate() {
                                pos[u] = i;
                            }
                            for (i, &(u, _)) in members.iter().enumerate() {
                                let row = g.neighbors(u).iter().zip(g.incident_edges(u));
                                for (&w, &id) in row {
                                    if u < w && pos[w] != usize::MAX {
                                        edges.push((id, i, pos[w]));
                                    }
                                }
                            }
                            for &(u, _) in &members {
                                pos[u] = usize::MAX;
                            }
                            edges.sort_unstable();
                        }
                        Ok(RootEgo { members, edges })
                    })
                    .collect()
            })
            .collect();
        let mut roots = Vec::with_capacity(n);
        for b in blocks {
            roots.extend(b?);
        }
        let mut edge_roots = vec![0; g.edge_count()];
        for r in &roots {
            for &(id, _, _) in &r.edges {
                edge_roots[id] += 1;
            }
        }
        Ok(Self {
            k,
            node_count: n,
            edge_count: g.edge_count(),
            roots,
            edge_roots,
            with_edges,
        })
    }
}

/// Node features, optional edge features, and the ego-networks they live
/// on.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerState {
    pub x: Array2<f64>,
    pub e: Option<Array2<f64>>,
    pub structure: Arc<EgoStructure>,
}

impl LayerState {
    pub fn new(x: Array2<f64>, e: Option<Array2<f64>>, structure: Arc<EgoStructure>) -> Result<Self> {
        if x.nrows() != structure.node_count {
            return Err(Error::ShapeMismatch(format!(
                "{} feature rows for {} nodes",
                x.nrows(),
                structure.node_count
            )));
        }
        if let Some(e) = &e {
            if e.nrows() != structure.edge_count {
                return Err(Error::ShapeMismatch(format!(
                    "{} edge feature rows for {} edges",
                    e.nrows(),
                    structure.edge_count
                )));
            }
        }
        Ok(Self { x, e, structure })
    }
}
