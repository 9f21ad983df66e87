use ndarray::{s, Array1, Array2, Axis};

use super::dense::{Activation, Dense, Mlp};
use super::forward::root_inputs;
use super::params::{EleneLParams, Pooling};
use super::RootEgo;
use crate::encode::NodeEncoder;
use crate::error::{Error, Result};
use crate::graph::{bfs_levels, Graph, NodeId};
use crate::vectorize::{Mode, Slot, SparseVec};

/// Magnitude used to switch off member messages from the wrong shell.
const GATE: f64 = 1e30;

fn linear(weight: Array2<f64>) -> Dense {
    let out = weight.nrows();
    Dense::new(weight, Array1::zeros(out), Activation::Identity).expect("bias matches rows")
}

/// One step of a shortest-path network computed directly:
/// `x'_v = phi_sp((1 + eps) x_v + sum_i alphas[i-1] * sum of x_u over the
/// nodes at distance exactly i from v)`.
pub fn spnn_forward(
    g: &Graph,
    x: &Array2<f64>,
    alphas: &[f64],
    eps: f64,
    k: usize,
    phi_sp: &Mlp,
) -> Result<Array2<f64>> {
    if alphas.len() != k {
        return Err(Error::ShapeMismatch(format!("{} weights for depth {k}", alphas.len())));
    }
    if x.nrows() != g.node_count() || phi_sp.in_dim() != x.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "features {:?} for {} nodes and a map taking {} inputs",
            x.dim(),
            g.node_count(),
            phi_sp.in_dim()
        )));
    }
    let mut agg = x * (1.0 + eps);
    for v in 0..g.node_count() {
        let levels = bfs_levels(g, v, k)?;
        for (&u, &l) in &levels.dist {
            if l > 0 {
                let mut row = agg.row_mut(v);
                row.scaled_add(alphas[l - 1], &x.row(u));
            }
        }
    }
    Ok(phi_sp.forward(&agg))
}

/// Node-centric parameters whose layer output equals [`spnn_forward`] with
/// the same `alphas`, `eps` and `phi_sp` on any graph of maximum degree at
/// most `rho`.
///
/// The first node table holds, for every distance `l`, zero in column
/// `i` when `l = i + 1` and `-GATE` otherwise. The member map adds that
/// column to `±x_u` under a ReLU, so only the shell at distance `i + 1`
/// survives, and then weights the surviving shells by `alphas`. The root map
/// forms `(1 + eps) x_v + pooled`, applies `phi_sp` while carrying `x_v`
/// alongside on linear lanes, and finally subtracts `x_v` so the residual
/// update with unit gate yields `phi_sp(..)` itself.
pub fn build_spnn_equivalent(
    k: usize,
    rho: usize,
    alphas: &[f64],
    eps: f64,
    phi_sp: &Mlp,
) -> Result<EleneLParams> {
    if alphas.len() != k {
        return Err(Error::InvalidParams(format!("{} weights for depth {k}", alphas.len())));
    }
    let f = phi_sp.in_dim();
    if phi_sp.out_dim() != f {
        return Err(Error::InvalidParams(format!(
            "phi_sp maps {f} to {} features; it must preserve the width",
            phi_sp.out_dim()
        )));
    }
    let omega = k.max(1);
    let rows = (rho + 1) * (k + 1);
    let mut gate = Array2::zeros((rows, omega));
    for l in 0..=k {
        for deg in 0..=rho {
            for i in 0..k {
                if l != i + 1 {
                    gate[[l * (rho + 1) + deg, i]] = -GATE;
                }
            }
        }
    }
    let zero_table = Array2::zeros((rows, omega));
    let member_in = 2 * f + 3 * omega;

    let phi_nd = if k == 0 {
        Mlp::single(linear(Array2::zeros((f, member_in))))
    } else {
        // Hidden lane (i, j, sign) at index (2 i + sign) f + j.
        let mut w1 = Array2::zeros((2 * k * f, member_in));
        let mut w2 = Array2::zeros((f, 2 * k * f));
        for i in 0..k {
            for j in 0..f {
                for (sign, sv) in [(0, 1.0), (1, -1.0)] {
                    let h = (2 * i + sign) * f + j;
                    w1[[h, f + j]] = sv;
                    w1[[h, 2 * f + i]] = 1.0;
                    w2[[j, h]] = sv * alphas[i];
                }
            }
        }
        let b1 = Array1::zeros(2 * k * f);
        Mlp::new(
            member_in,
            vec![Dense::new(w1, b1, Activation::Relu)?, linear(w2)],
        )?
    };

    // [x_v, pooled] -> [(1 + eps) x_v + pooled, x_v]
    let mut combine = Array2::zeros((2 * f, 2 * f));
    for j in 0..f {
        combine[[j, j]] = 1.0 + eps;
        combine[[j, f + j]] = 1.0;
        combine[[f + j, j]] = 1.0;
    }
    let mut layers = vec![linear(combine)];
    for l in &phi_sp.layers {
        let (i, o) = (l.in_dim(), l.out_dim());
        let mut w = Array2::zeros((o + f, i + f));
        w.slice_mut(s![..o, ..i]).assign(&l.weight);
        w.slice_mut(s![o.., i..]).assign(&Array2::eye(f));
        let mut b = Array1::zeros(o + f);
        b.slice_mut(s![..o]).assign(&l.bias);
        layers.push(Dense::new(w, b, l.activation)?.with_linear_tail(l.linear_tail + f)?);
    }
    let mut subtract = Array2::zeros((f, 2 * f));
    for j in 0..f {
        subtract[[j, j]] = 1.0;
        subtract[[j, f + j]] = -1.0;
    }
    layers.push(linear(subtract));
    let phi_nd_out = Mlp::new(2 * f, layers)?;

    let p = EleneLParams {
        omega,
        rho,
        k,
        mode: Mode::Nd,
        pooling: Pooling::Sum,
        w_nd: [gate, zero_table.clone(), zero_table],
        w_ed: None,
        phi_nd,
        phi_ed: None,
        phi_nd_out,
        phi_ed_out: None,
        gamma_nd: 1.0,
        gamma_ed: 0.0,
    };
    p.validate()?;
    Ok(p)
}

/// Node-centric parameters with identity embedding tables, sum pooling and
/// a member map that passes the embedding through unchanged, for node
/// features of width `f`.
pub fn histogram_probe(k: usize, rho: usize, f: usize) -> EleneLParams {
    let s = (rho + 1) * (k + 1);
    let mut select = Array2::zeros((3 * s, 2 * f + 3 * s));
    select.slice_mut(s![.., 2 * f..]).assign(&Array2::eye(3 * s));
    EleneLParams {
        omega: s,
        rho,
        k,
        mode: Mode::Nd,
        pooling: Pooling::Sum,
        w_nd: [Array2::eye(s), Array2::eye(s), Array2::eye(s)],
        w_ed: None,
        phi_nd: Mlp::single(linear(select)),
        phi_ed: None,
        phi_nd_out: Mlp::single(linear(Array2::zeros((f, f + 3 * s)))),
        phi_ed_out: None,
        gamma_nd: 1.0,
        gamma_ed: 0.0,
    }
}

/// Pools `v`'s member messages under probe parameters and reads the result
/// back as the three-slot degree histogram of its ego-network.
pub fn recover_histogram(g: &Graph, v: NodeId, k: usize, p: &EleneLParams) -> Result<SparseVec> {
    p.validate()?;
    g.check_node(v)?;
    let s = p.table_rows();
    let is_probe = p.k == k
        && p.mode == Mode::Nd
        && p.pooling == Pooling::Sum
        && p.omega == s
        && p.w_nd.iter().all(|t| *t == Array2::<f64>::eye(s))
        && p.phi_nd.out_dim() == 3 * s;
    if !is_probe {
        return Err(Error::InvalidParams(
            "histogram recovery needs identity tables, sum pooling and a 3S-wide member map".into(),
        ));
    }
    let members = NodeEncoder::new(g, k).member_quads(v)?;
    let ego = RootEgo {
        members,
        edges: Vec::new(),
    };
    let x = Array2::zeros((g.node_count(), p.node_width()));
    let inp = root_inputs(p, &x, None, v, &ego)?;
    let pooled = p.phi_nd.forward(&inp.nd_in).sum_axis(Axis(0));
    let mut pairs = Vec::new();
    for (i, &c) in pooled.iter().enumerate() {
        let r = c.round();
        if r < 0.0 || (c - r).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!("pooled entry {i} is {c}, not a count")));
        }
        if r > 0.0 {
            pairs.push((i, r as u64));
        }
    }
    Ok(SparseVec::from_pairs(3 * s, k, p.rho, Slot::ALL.to_vec(), pairs))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::encode::encode_node_nd;
    use crate::graph::{generate, Family};
    use crate::layer::{layer_forward, EgoStructure, LayerState};
    use crate::vectorize::to_sparse_vector;

    fn state(g: &Graph, k: usize, x: Array2<f64>) -> LayerState {
        LayerState::new(x, None, Arc::new(EgoStructure::nodes(g, k).unwrap())).unwrap()
    }

    fn random_x(n: usize, f: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        Array2::from_shape_fn((n, f), |_| rng.gen_range(-1.0..1.0))
    }

    fn max_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn cycle_shells_are_summed() {
        let g = generate(Family::Cycle { n: 6 }).unwrap();
        let x = Array2::from_shape_fn((6, 1), |(i, _)| 10f64.powi(i as i32));
        let out = spnn_forward(&g, &x, &[1.0, 1.0], 0.0, 2, &Mlp::identity(1)).unwrap();
        assert_eq!(out[[0, 0]], 1.0 + 10.0 + 1e5 + 100.0 + 1e4);
    }

    #[test]
    fn zero_depth_and_isolated_nodes_only_scale() {
        let g = Graph::empty(3);
        let x = array2(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
        let a = spnn_forward(&g, &x, &[2.0], 0.5, 1, &Mlp::identity(2)).unwrap();
        let b = spnn_forward(&g, &x, &[], 0.5, 0, &Mlp::identity(2)).unwrap();
        assert_eq!(a, &x * 1.5);
        assert_eq!(a, b);
        assert!(matches!(
            spnn_forward(&g, &x, &[1.0], 0.0, 2, &Mlp::identity(2)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    fn array2(rows: &[[f64; 2]]) -> Array2<f64> {
        Array2::from_shape_fn((rows.len(), 2), |(i, j)| rows[i][j])
    }

    #[test]
    fn zero_weights_scale_the_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = crate::graph::generate::erdos_renyi(10, 0.3, 2);
        let phi = Mlp::single(Dense::random(3, 3, Activation::Tanh, &mut rng));
        let p = build_spnn_equivalent(2, g.max_degree(), &[0.0, 0.0], 0.3, &phi).unwrap();
        let x = random_x(10, 3, &mut rng);
        let out = layer_forward(&state(&g, 2, x.clone()), &p).unwrap();
        assert!(max_diff(&out.x, &phi.forward(&(&x * 1.3))) < 1e-12);
    }

    #[test]
    fn unit_weight_is_neighbor_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = generate(Family::BarabasiAlbert { n: 12, m_min: 2, seed: 3 }).unwrap();
        let p = build_spnn_equivalent(1, g.max_degree(), &[1.0], 0.0, &Mlp::identity(2)).unwrap();
        let x = random_x(12, 2, &mut rng);
        let out = layer_forward(&state(&g, 1, x.clone()), &p).unwrap();
        let mut expected = x.clone();
        for v in 0..12 {
            for &u in g.neighbors(v) {
                let mut row = expected.row_mut(v);
                row += &x.row(u);
            }
        }
        assert!(max_diff(&out.x, &expected) < 1e-12);
    }

    #[test]
    fn construction_matches_direct_update() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..6 {
            let k = trial % 4;
            let g = crate::graph::generate::erdos_renyi(10, 0.3, trial as u64);
            let alphas: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let eps = rng.gen_range(-1.0..1.0);
            let phi = Mlp::new(
                3,
                vec![
                    Dense::random(3, 5, Activation::Relu, &mut rng),
                    Dense::random(5, 3, Activation::Tanh, &mut rng).with_linear_tail(1).unwrap(),
                ],
            )
            .unwrap();
            let p = build_spnn_equivalent(k, g.max_degree(), &alphas, eps, &phi).unwrap();
            let x = random_x(10, 3, &mut rng);
            let out = layer_forward(&state(&g, k, x.clone()), &p).unwrap();
            let direct = spnn_forward(&g, &x, &alphas, eps, k, &phi).unwrap();
            assert!(max_diff(&out.x, &direct) < 1e-10, "trial {trial}");
        }
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let phi = Mlp::identity(2);
        assert!(matches!(
            build_spnn_equivalent(2, 3, &[1.0], 0.0, &phi),
            Err(Error::InvalidParams(_))
        ));
        let narrow = Mlp::single(linear(Array2::zeros((1, 2))));
        assert!(matches!(
            build_spnn_equivalent(1, 3, &[1.0], 0.0, &narrow),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn isolated_node_histogram() {
        let g = Graph::empty(1);
        let p = histogram_probe(2, 3, 1);
        let h = recover_histogram(&g, 0, 2, &p).unwrap();
        assert_eq!(h.entries(), &[(0, 1), (12, 1), (24, 1)]);
    }

    #[test]
    fn histogram_matches_sparse_vector() {
        let k3 = generate(Family::Cycle { n: 3 }).unwrap();
        let h = recover_histogram(&k3, 0, 1, &histogram_probe(1, 2, 2)).unwrap();
        assert_eq!(h.to_line(7), "7 18 0:1 4:2 8:1 11:2 14:1 15:2");

        let rook = generate(Family::Rook { n: 4 }).unwrap();
        let h = recover_histogram(&rook, 5, 2, &histogram_probe(2, 6, 1)).unwrap();
        let abs = h.restrict(Slot::Abs).unwrap();
        assert_eq!(abs.entries(), &[(6, 1), (13, 6), (20, 9)]);
        let direct = to_sparse_vector(&encode_node_nd(&rook, 5, 2).unwrap(), 2, 6).unwrap();
        assert_eq!(h, direct);
    }

    #[test]
    fn histogram_rejects_other_parameters() {
        let g = generate(Family::Cycle { n: 4 }).unwrap();
        let mut p = histogram_probe(1, 2, 1);
        assert!(recover_histogram(&g, 0, 2, &p).is_err());
        p.pooling = Pooling::MaskedMean;
        assert!(matches!(recover_histogram(&g, 0, 1, &p), Err(Error::InvalidParams(_))));
    }
}
