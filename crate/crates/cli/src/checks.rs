//! Self-checks run by `elene check`.

use std::sync::Arc;

use anyhow::Result;
use elene::encode::{encode_node_nd, intersect_ego};
use elene::expressivity::{check_srg, elene_distinguish, srg_closed_form_nd, wl1_distinguish};
use elene::graph::generate::erdos_renyi;
use elene::graph::{diameter, generate, Family};
use elene::layer::{
    build_spnn_equivalent, grad_check, histogram_probe, layer_forward, recover_histogram, spnn_forward,
    Activation, Dense, EgoStructure, EleneLParams, LayerConfig, LayerState, Mlp, Pooling,
};
use elene::vectorize::{graph_signature, to_sparse_vector};
use elene::{Graph, Mode};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Combinatorial and construction checks.
    Theorems,
    /// Finite-difference gradient check.
    Gradients,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, result: Result<(bool, String)>) -> Outcome {
    match result {
        Ok((pass, detail)) => Outcome { name, pass, detail },
        Err(e) => Outcome {
            name,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn family(f: Family) -> Result<Graph> {
    Ok(generate(f)?)
}

fn beyond_color_refinement() -> Result<(bool, String)> {
    let c6 = family(Family::Cycle { n: 6 })?;
    let tt = family(Family::DisjointTriangles { t: 2 })?;
    let wl = wl1_distinguish(&c6, &tt);
    let nd = elene_distinguish(&c6, &tt, 1, Mode::Nd)?;
    let mut violations = 0;
    for seed in 0..100 {
        let g = erdos_renyi(10, 0.3, seed);
        let h = erdos_renyi(10, 0.3, seed + 500);
        let k = diameter(&g).max(diameter(&h)).max(1);
        if wl1_distinguish(&g, &h) && !elene_distinguish(&g, &h, k, Mode::Nd)? {
            violations += 1;
        }
    }
    Ok((
        !wl && nd && violations == 0,
        format!("C6 vs 2K3: 1-WL {wl}, node encoding {nd}; random pairs missed {violations}"),
    ))
}

fn srg_closed_form() -> Result<(bool, String)> {
    let mut bad = 0;
    for n in 3..=5 {
        let g = family(Family::Rook { n })?;
        let closed = srg_closed_form_nd(check_srg(&g)?)?;
        for v in 0..g.node_count() {
            if encode_node_nd(&g, v, 2)?.entries() != closed.entries() {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("rook 3..5 at k=2: {bad} nodes differ from the closed form")))
}

fn srg_node_equivalence() -> Result<(bool, String)> {
    let r = family(Family::Rook { n: 4 })?;
    let s = family(Family::Shrikhande)?;
    let mut equal = true;
    for k in 1..=2 {
        equal &= graph_signature(&r, k, Mode::Nd)? == graph_signature(&s, k, Mode::Nd)?;
    }
    Ok((equal, format!("rook(4) vs shrikhande node signatures equal at k=1,2: {equal}")))
}

fn srg_edge_separation() -> Result<(bool, String)> {
    let r = family(Family::Rook { n: 4 })?;
    let s = family(Family::Shrikhande)?;
    let differ = graph_signature(&r, 1, Mode::Ed)? != graph_signature(&s, 1, Mode::Ed)?;
    let count = |g: &Graph, expected: usize| -> Result<bool> {
        for &(u, v) in g.edges() {
            if intersect_ego(g, u, v, 1)?.edges.len() != expected {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let counts = count(&r, 6)? && count(&s, 5)?;
    Ok((
        differ && counts,
        format!("edge signatures differ at k=1: {differ}; intersection edges 6 vs 5: {counts}"),
    ))
}

fn histogram_recovery() -> Result<(bool, String)> {
    let mut bad = 0;
    for seed in 0..30 {
        let g = erdos_renyi(4 + (seed % 20) as usize, 0.25, seed);
        let k = (seed % 4) as usize;
        let probe = histogram_probe(k, g.max_degree(), 2);
        for v in 0..g.node_count() {
            let direct = to_sparse_vector(&encode_node_nd(&g, v, k)?, k, g.max_degree())?;
            if recover_histogram(&g, v, k, &probe)? != direct {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{bad} recovered histograms differ from the sparse vector")))
}

fn spnn_emulation() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for seed in 0..30 {
        let g = erdos_renyi(4 + (seed % 28) as usize, 0.2, seed);
        let k = (seed % 4) as usize;
        let alphas: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let eps = rng.gen_range(-1.0..1.0);
        let phi = Mlp::new(3, vec![Dense::random(3, 3, Activation::Tanh, &mut rng)])?;
        let p = build_spnn_equivalent(k, g.max_degree(), &alphas, eps, &phi)?;
        let x = Array2::from_shape_fn((g.node_count(), 3), |_| rng.gen_range(-1.0..1.0));
        let state = LayerState::new(x.clone(), None, Arc::new(EgoStructure::nodes(&g, k)?))?;
        let out = layer_forward(&state, &p)?;
        let direct = spnn_forward(&g, &x, &alphas, eps, k, &phi)?;
        for (a, b) in out.x.iter().zip(&direct) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max abs gap {worst:.3e} (tolerance 1e-10)")))
}

/// Largest gradient-check error over `instances` random tanh layers.
pub fn gradient_error(instances: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for seed in 0..instances {
        let g = erdos_renyi(8, 0.35, seed);
        let mode = if seed % 2 == 0 { Mode::Nd } else { Mode::Ed };
        let pooling = if seed % 4 < 2 { Pooling::Sum } else { Pooling::MaskedMean };
        let cfg = LayerConfig {
            node_width: 3,
            edge_width: 2,
            omega: 4,
            rho: g.max_degree(),
            k: 2,
            mode,
            pooling,
            hidden: 4,
            activation: Activation::Tanh,
        };
        let p = EleneLParams::random(&cfg, seed)?;
        let structure = match mode {
            Mode::Nd => EgoStructure::nodes(&g, 2)?,
            Mode::Ed => EgoStructure::with_edges(&g, 2)?,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let x = Array2::from_shape_fn((8, 3), |_| rng.gen_range(-1.0..1.0));
        let e = (mode == Mode::Ed).then(|| Array2::from_shape_fn((g.edge_count(), 2), |_| rng.gen_range(-1.0..1.0)));
        let state = LayerState::new(x, e, Arc::new(structure))?;
        worst = worst.max(grad_check(&state, &p, 1e-5, seed)?);
    }
    Ok(worst)
}

fn gradients() -> Result<(bool, String)> {
    let worst = gradient_error(8)?;
    Ok((worst < 1e-6, format!("max relative error {worst:.3e} (tolerance 1e-6)")))
}

pub fn run(suite: Suite) -> Vec<Outcome> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Theorems | Suite::All) {
        out.push(outcome("beyond-1wl", beyond_color_refinement()));
        out.push(outcome("srg-closed-form", srg_closed_form()));
        out.push(outcome("srg-node-equivalence", srg_node_equivalence()));
        out.push(outcome("histogram-recovery", histogram_recovery()));
        out.push(outcome("srg-edge-separation", srg_edge_separation()));
        out.push(outcome("spnn-emulation", spnn_emulation()));
    }
    if matches!(suite, Suite::Gradients | Suite::All) {
        out.push(outcome("gradients", gradients()));
    }
    out
}
