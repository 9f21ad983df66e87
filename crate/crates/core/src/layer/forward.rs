use ndarray::{s, Array1, Array2, ArrayView1, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dense::Trace;
use super::params::{EleneLParams, Pooling};
use super::{EgoStructure, LayerState, RootEgo, ROOT_BLOCK};
use crate::error::{Error, Result};
use crate::vectorize::Mode;

/// Gradients of a scalar loss with respect to every parameter (in the same
/// layout as the parameters) and to the input features.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub params: EleneLParams,
    pub x: Array2<f64>,
    pub e: Option<Array2<f64>>,
}

#[derive(Debug, Clone)]
struct ForwardCache {
    input: LayerState,
    root_trace: Trace,
    y: Array2<f64>,
    edge_trace: Option<Trace>,
    z: Option<Array2<f64>>,
}

/// Parameters plus the values saved by the last forward pass.
#[derive(Debug, Clone)]
pub struct EleneLayer {
    pub params: EleneLParams,
    cache: Option<ForwardCache>,
}

/// Gathered inputs of one root's member and edge messages.
pub(crate) struct RootInputs {
    pub(crate) nd_in: Array2<f64>,
    nd_rows: Vec<[usize; 3]>,
    ed: Option<(Array2<f64>, Vec<[[usize; 3]; 2]>)>,
}

fn check(p: &EleneLParams, state: &LayerState) -> Result<()> {
    p.validate()?;
    let st = &state.structure;
    if st.k != p.k {
        return Err(Error::ShapeMismatch(format!(
            "ego-networks built for k={} but parameters use k={}",
            st.k, p.k
        )));
    }
    if state.x.ncols() != p.node_width() {
        return Err(Error::ShapeMismatch(format!(
            "{} node feature columns, parameters expect {}",
            state.x.ncols(),
            p.node_width()
        )));
    }
    if p.mode == Mode::Ed {
        if !st.has_edges() {
            return Err(Error::ShapeMismatch(
                "edge-centric parameters need an edge-centric structure".into(),
            ));
        }
        match &state.e {
            Some(e) if e.ncols() == p.edge_width() => {}
            Some(e) => {
                return Err(Error::ShapeMismatch(format!(
                    "{} edge feature columns, parameters expect {}",
                    e.ncols(),
                    p.edge_width()
                )))
            }
            None => return Err(Error::ShapeMismatch("edge-centric layer needs edge features".into())),
        }
    }
    Ok(())
}

pub(crate) fn root_inputs(
    p: &EleneLParams,
    x: &Array2<f64>,
    e: Option<&Array2<f64>>,
    v: usize,
    ego: &RootEgo,
) -> Result<RootInputs> {
    let (f, w3) = (x.ncols(), 3 * p.omega);
    let mut nd_in = Array2::zeros((ego.members.len(), 2 * f + w3));
    let mut nd_rows = Vec::with_capacity(ego.members.len());
    for (r, (u, q)) in ego.members.iter().enumerate() {
        let rows = p.node_rows(q)?;
        let mut dst = nd_in.row_mut(r);
        dst.slice_mut(s![..f]).assign(&x.row(v));
        dst.slice_mut(s![f..2 * f]).assign(&x.row(*u));
        p.write_node_embedding(&rows, dst.slice_mut(s![2 * f..]));
        nd_rows.push(rows);
    }
    let ed = match (p.mode, e) {
        (Mode::Ed, Some(e)) => {
            let fe = e.ncols();
            let mut ed_in = Array2::zeros((ego.edges.len(), 2 * f + fe + w3));
            let mut ed_rows = Vec::with_capacity(ego.edges.len());
            for (r, &(id, ia, ib)) in ego.edges.iter().enumerate() {
                let ((a, qa), (b, qb)) = (ego.members[ia], ego.members[ib]);
                let rows = p.edge_rows(&qa, &qb)?;
                let mut dst = ed_in.row_mut(r);
                dst.slice_mut(s![..f]).assign(&x.row(v));
                dst.slice_mut(s![f..f + fe]).assign(&e.row(id));
                dst.slice_mut(s![f + fe..2 * f + fe])
                    .assign(&(&x.row(a) * &x.row(b)));
                p.write_edge_embedding(&rows, dst.slice_mut(s![2 * f + fe..]));
                ed_rows.push(rows);
            }
            Some((ed_in, ed_rows))
        }
        _ => None,
    };
    Ok(RootInputs { nd_in, nd_rows, ed })
}

fn pool_scale(pooling: Pooling, count: usize) -> f64 {
    match pooling {
        Pooling::Sum => 1.0,
        Pooling::MaskedMean if count == 0 => 0.0,
        Pooling::MaskedMean => 1.0 / count as f64,
    }
}

struct RootOutput {
    pooled_nd: Array1<f64>,
    pooled_ed: Option<Array1<f64>>,
    edge_msgs: Option<Array2<f64>>,
}

fn blocks(n: usize) -> Vec<std::ops::Range<usize>> {
    (0..n)
        .step_by(ROOT_BLOCK)
        .map(|s| s..(s + ROOT_BLOCK).min(n))
        .collect()
}

fn run_forward(p: &EleneLParams, state: &LayerState) -> Result<(LayerState, ForwardCache)> {
    check(p, state)?;
    let st: &EgoStructure = &state.structure;
    let n = st.node_count;
    let outs: Vec<Result<Vec<RootOutput>>> = blocks(n)
        .into_par_iter()
        .map(|range| {
            range
                .map(|v| {
                    let ego = &st.roots[v];
                    let inp = root_inputs(p, &state.x, state.e.as_ref(), v, ego)?;
                    let h = p.phi_nd.forward(&inp.nd_in);
                    let pooled_nd = h.sum_axis(Axis(0)) * pool_scale(p.pooling, h.nrows());
                    let (pooled_ed, edge_msgs) = match (&inp.ed, &p.phi_ed) {
                        (Some((ed_in, _)), Some(phi_ed)) => {
                            let g = phi_ed.forward(ed_in);
                            let pooled = g.sum_axis(Axis(0)) * pool_scale(p.pooling, g.nrows());
                            (Some(pooled), Some(g))
                        }
                        _ => (None, None),
                    };
                    Ok(RootOutput {
                        pooled_nd,
                        pooled_ed,
                        edge_msgs,
                    })
                })
                .collect()
        })
        .collect();

    let f = p.node_width();
    let h_nd = p.phi_nd.out_dim();
    let h_ed = p.phi_ed.as_ref().map_or(0, |m| m.out_dim());
    let mut root_in = Array2::zeros((n, f + h_nd + h_ed));
    root_in.slice_mut(s![.., ..f]).assign(&state.x);
    let mut edge_pool = (p.mode == Mode::Ed).then(|| Array2::<f64>::zeros((st.edge_count, h_ed)));
    let mut v = 0;
    for block in outs {
        for out in block? {
            root_in.slice_mut(s![v, f..f + h_nd]).assign(&out.pooled_nd);
            if let Some(pe) = &out.pooled_ed {
                root_in.slice_mut(s![v, f + h_nd..]).assign(pe);
            }
            if let (Some(pool), Some(msgs)) = (&mut edge_pool, &out.edge_msgs) {
                for (r, &(id, _, _)) in st.roots[v].edges.iter().enumerate() {
                    let mut dst = pool.row_mut(id);
                    dst += &msgs.row(r);
                }
            }
            v += 1;
        }
    }

    let (y, root_trace) = p.phi_nd_out.forward_trace(root_in);
    let x_new = &state.x + &(&y * p.gamma_nd);
    let (e_new, z, edge_trace) = match (edge_pool, &p.phi_ed_out, &state.e) {
        (Some(mut pool), Some(phi), Some(e)) => {
            for (mut row, &c) in pool.rows_mut().into_iter().zip(&st.edge_roots) {
                row *= pool_scale(p.pooling, c);
            }
            let (z, trace) = phi.forward_trace(pool);
            (Some(e + &(&z * p.gamma_ed)), Some(z), Some(trace))
        }
        _ => (state.e.clone(), None, None),
    };
    let out = LayerState {
        x: x_new,
        e: e_new,
        structure: state.structure.clone(),
    };
    let cache = ForwardCache {
        input: state.clone(),
        root_trace,
        y,
        edge_trace,
        z,
    };
    Ok((out, cache))
}

/// One layer application without keeping anything for a backward pass.
pub fn layer_forward(state: &LayerState, p: &EleneLParams) -> Result<LayerState> {
    run_forward(p, state).map(|(out, _)| out)
}

struct BlockGrads {
    params: EleneLParams,
    x: Array2<f64>,
    e: Option<Array2<f64>>,
}

fn add_row(mut dst: ndarray::ArrayViewMut1<f64>, src: ArrayView1<f64>) {
    dst += &src;
}

impl EleneLayer {
    pub fn new(params: EleneLParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            cache: None,
        })
    }

    pub fn forward(&mut self, state: &LayerState) -> Result<LayerState> {
        let (out, cache) = run_forward(&self.params, state)?;
        self.cache = Some(cache);
        Ok(out)
    }

    /// Gradients of `<g_x, X'> + <g_e, E'>` for the cached forward pass,
    /// where `X'`, `E'` are its outputs.
    pub fn backward(&self, g_x: &Array2<f64>, g_e: Option<&Array2<f64>>) -> Result<Gradients> {
        let cache = self.cache.as_ref().ok_or(Error::NoForwardCache)?;
        let p = &self.params;
        let state = &cache.input;
        let st = &state.structure;
        if g_x.dim() != state.x.dim() {
            return Err(Error::ShapeMismatch(format!(
                "upstream node gradient {:?}, features {:?}",
                g_x.dim(),
                state.x.dim()
            )));
        }
        let g_e = match (&state.e, g_e) {
            (Some(e), Some(g)) if g.dim() == e.dim() => Some(g.clone()),
            (Some(e), None) => Some(Array2::zeros(e.raw_dim())),
            (None, None) => None,
            _ => return Err(Error::ShapeMismatch("upstream edge gradient".into())),
        };

        let mut grads = p.zeros_like();
        let mut gx = g_x.clone();
        let f = p.node_width();
        let h_nd = p.phi_nd.out_dim();

        grads.gamma_nd = (g_x * &cache.y).sum();
        let g_root_in =
            p.phi_nd_out
                .backward(&cache.root_trace, g_x * p.gamma_nd, &mut grads.phi_nd_out);
        gx += &g_root_in.slice(s![.., ..f]);
        let g_pool_nd = g_root_in.slice(s![.., f..f + h_nd]);
        let g_pool_ed = g_root_in.slice(s![.., f + h_nd..]);

        let mut g_edge_pool = None;
        if let (Some(z), Some(trace), Some(phi), Some(ge)) =
            (&cache.z, &cache.edge_trace, &p.phi_ed_out, &g_e)
        {
            grads.gamma_ed = (ge * z).sum();
            let mut gp = phi.backward(trace, ge * p.gamma_ed, grads.phi_ed_out.as_mut().unwrap());
            for (mut row, &c) in gp.rows_mut().into_iter().zip(&st.edge_roots) {
                row *= pool_scale(p.pooling, c);
            }
            g_edge_pool = Some(gp);
        }

        let parts: Vec<Result<BlockGrads>> = blocks(st.node_count)
            .into_par_iter()
            .map(|range| {
                let mut acc = BlockGrads {
                    params: p.zeros_like(),
                    x: Array2::zeros(state.x.raw_dim()),
                    e: state.e.as_ref().map(|e| Array2::zeros(e.raw_dim())),
                };
                for v in range {
                    self.root_backward(
                        v,
                        g_pool_nd.row(v),
                        g_pool_ed.row(v),
                        g_edge_pool.as_ref(),
                        &mut acc,
                    )?;
                }
                Ok(acc)
            })
            .collect();

        let mut ge_total = g_e;
        for part in parts {
            let part = part?;
            grads.add_assign(&part.params);
            gx += &part.x;
            if let (Some(t), Some(pe)) = (&mut ge_total, &part.e) {
                *t += pe;
            }
        }
        Ok(Gradients {
            params: grads,
            x: gx,
            e: ge_total,
        })
    }

    fn root_backward(
        &self,
        v: usize,
        g_pool_nd: ArrayView1<f64>,
        g_pool_ed: ArrayView1<f64>,
        g_edge_pool: Option<&Array2<f64>>,
        acc: &mut BlockGrads,
    ) -> Result<()> {
        let p = &self.params;
        let state = &self.cache.as_ref().expect("checked by caller").input;
        let ego = &state.structure.roots[v];
        let x = &state.x;
        let (f, w) = (x.ncols(), p.omega);
        let inp = root_inputs(p, &state.x, state.e.as_ref(), v, ego)?;

        let (_, trace) = p.phi_nd.forward_trace(inp.nd_in);
        let scale = pool_scale(p.pooling, ego.members.len());
        let g_h = Array2::from_shape_fn((ego.members.len(), g_pool_nd.len()), |(_, j)| {
            g_pool_nd[j] * scale
        });
        let g_in = p.phi_nd.backward(&trace, g_h, &mut acc.params.phi_nd);
        for (r, (u, _)) in ego.members.iter().enumerate() {
            let row = g_in.row(r);
            add_row(acc.x.row_mut(v), row.slice(s![..f]));
            add_row(acc.x.row_mut(*u), row.slice(s![f..2 * f]));
            for j in 0..3 {
                let src = row.slice(s![2 * f + j * w..2 * f + (j + 1) * w]);
                add_row(acc.params.w_nd[j].row_mut(inp.nd_rows[r][j]), src);
            }
        }

        if let (Some((ed_in, ed_rows)), Some(phi_ed), Some(g_pool_e), Some(e)) =
            (inp.ed, &p.phi_ed, g_edge_pool, &state.e)
        {
            let fe = e.ncols();
            let (_, trace) = phi_ed.forward_trace(ed_in);
            let scale = pool_scale(p.pooling, ego.edges.len());
            let mut g_msg = Array2::zeros((ego.edges.len(), phi_ed.out_dim()));
            for (r, &(id, _, _)) in ego.edges.iter().enumerate() {
                let mut dst = g_msg.row_mut(r);
                dst.assign(&g_pool_ed);
                dst *= scale;
                dst += &g_pool_e.row(id);
            }
            let g_in = phi_ed.backward(&trace, g_msg, acc.params.phi_ed.as_mut().unwrap());
            let tables = acc.params.w_ed.as_mut().unwrap();
            let ge = acc.e.as_mut().unwrap();
            for (r, &(id, ia, ib)) in ego.edges.iter().enumerate() {
                let (a, b) = (ego.members[ia].0, ego.members[ib].0);
                let row = g_in.row(r);
                add_row(acc.x.row_mut(v), row.slice(s![..f]));
                add_row(ge.row_mut(id), row.slice(s![f..f + fe]));
                let g_had = row.slice(s![f + fe..2 * f + fe]);
                let (xa, xb) = (x.row(a), x.row(b));
                add_row(acc.x.row_mut(a), (&g_had * &xb).view());
                add_row(acc.x.row_mut(b), (&g_had * &xa).view());
                let base = 2 * f + fe;
                for j in 0..3 {
                    let src = row.slice(s![base + j * w..base + (j + 1) * w]);
                    add_row(tables[j].row_mut(ed_rows[r][0][j]), src);
                    add_row(tables[j].row_mut(ed_rows[r][1][j]), src);
                }
            }
        }
        Ok(())
    }
}

fn weighted_sum(r_x: &Array2<f64>, r_e: Option<&Array2<f64>>, out: &LayerState) -> f64 {
    let mut l = (r_x * &out.x).sum();
    if let (Some(r), Some(e)) = (r_e, &out.e) {
        l += (r * e).sum();
    }
    l
}

/// Largest `|analytic - fd| / max(1, |fd|)` over every parameter and input
/// feature, where `fd` is the central difference with step `h` of the loss
/// `<R_x, X'> + <R_e, E'>` for seeded random `R`.
pub fn grad_check(state: &LayerState, p: &EleneLParams, h: f64, seed: u64) -> Result<f64> {
    if !(1e-6..=1e-4).contains(&h) {
        return Err(Error::InvalidParams(format!("step {h} outside [1e-6, 1e-4]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layer = EleneLayer::new(p.clone())?;
    let out = layer.forward(state)?;
    let r_x = Array2::from_shape_fn(out.x.raw_dim(), |_| rng.gen_range(-1.0..1.0));
    let r_e = out
        .e
        .as_ref()
        .map(|e| Array2::from_shape_fn(e.raw_dim(), |_| rng.gen_range(-1.0..1.0)));
    let grads = layer.backward(&r_x, r_e.as_ref())?;

    let err = |analytic: f64, plus: f64, minus: f64| {
        let fd = (plus - minus) / (2.0 * h);
        (analytic - fd).abs() / fd.abs().max(1.0)
    };
    let mut worst = 0.0f64;

    let base = p.values();
    let analytic = grads.params.values();
    let mut probe = p.clone();
    for i in 0..base.len() {
        let mut vals = base.clone();
        vals[i] = base[i] + h;
        probe.set_values(&vals)?;
        let plus = weighted_sum(&r_x, r_e.as_ref(), &layer_forward(state, &probe)?);
        vals[i] = base[i] - h;
        probe.set_values(&vals)?;
        let minus = weighted_sum(&r_x, r_e.as_ref(), &layer_forward(state, &probe)?);
        worst = worst.max(err(analytic[i], plus, minus));
    }

    let mut shifted = state.clone();
    for idx in ndarray::indices(state.x.raw_dim()) {
        shifted.x[idx] = state.x[idx] + h;
        let plus = weighted_sum(&r_x, r_e.as_ref(), &layer_forward(&shifted, p)?);
        shifted.x[idx] = state.x[idx] - h;
        let minus = weighted_sum(&r_x, r_e.as_ref(), &layer_forward(&shifted, p)?);
        shifted.x[idx] = state.x[idx];
        worst = worst.max(err(grads.x[idx], plus, minus));
    }
    if let (Some(e), Some(ge)) = (&state.e, &grads.e) {
        for idx in ndarray::indices(e.raw_dim()) {
            let set = |s: &mut LayerState, val: f64| s.e.as_mut().expect("edge features")[idx] = val;
            set(&mut shifted, e[idx] + h);
            let plus = weighted_sum(&r_x, r_e.as_ref(), &layer_forward(&shifted, p)?);
            set(&mut shifted, e[idx] - h);
            let minus = weighted_sum(&r_x, r_e.as_ref(), &layer_forward(&shifted, p)?);
            set(&mut shifted, e[idx]);
            worst = worst.max(err(ge[idx], plus, minus));
        }
    }
    Ok(worst)
}
