use std::sync::Arc;

use elene::encode::encode_node_nd;
use elene::graph::generate::erdos_renyi;
use elene::layer::{
    build_spnn_equivalent, grad_check, histogram_probe, layer_forward, read_features_csv, recover_histogram,
    spnn_forward, write_features_csv, Activation, Dense, EgoStructure, EleneLParams, LayerConfig, LayerState, Mlp,
    Pooling,
};
use elene::vectorize::to_sparse_vector;
use elene::{Graph, Mode};
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.5f64, any::<u64>()).prop_map(|(n, p, seed)| erdos_renyi(n, p, seed))
}

fn random_state(g: &Graph, mode: Mode, k: usize, f: usize, fe: usize, seed: u64) -> LayerState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let structure = match mode {
        Mode::Nd => EgoStructure::nodes(g, k).unwrap(),
        Mode::Ed => EgoStructure::with_edges(g, k).unwrap(),
    };
    let x = Array2::from_shape_fn((g.node_count(), f), |_| rng.gen_range(-1.0..1.0));
    let e = (mode == Mode::Ed).then(|| Array2::from_shape_fn((g.edge_count(), fe), |_| rng.gen_range(-1.0..1.0)));
    LayerState::new(x, e, Arc::new(structure)).unwrap()
}

fn config(mode: Mode, pooling: Pooling, k: usize, rho: usize) -> LayerConfig {
    LayerConfig {
        node_width: 3,
        edge_width: 2,
        omega: 3,
        rho,
        k,
        mode,
        pooling,
        hidden: 4,
        activation: Activation::Tanh,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn probe_recovers_the_sparse_vector(g in graph(32), k in 0..=3usize, f in 1..4usize) {
        let rho = g.max_degree();
        let probe = histogram_probe(k, rho, f);
        for v in 0..g.node_count() {
            let direct = to_sparse_vector(&encode_node_nd(&g, v, k).unwrap(), k, rho).unwrap();
            prop_assert_eq!(recover_histogram(&g, v, k, &probe).unwrap(), direct);
        }
    }

    #[test]
    fn construction_emulates_shortest_path_update(g in graph(32), k in 0..=3usize, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphas: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let eps = rng.gen_range(-1.0..1.0);
        let phi = Mlp::new(4, vec![
            Dense::random(4, 6, Activation::Tanh, &mut rng),
            Dense::random(6, 4, Activation::Relu, &mut rng),
        ]).unwrap();
        let p = build_spnn_equivalent(k, g.max_degree(), &alphas, eps, &phi).unwrap();
        let s = random_state(&g, Mode::Nd, k, 4, 0, seed);
        let out = layer_forward(&s, &p).unwrap();
        let direct = spnn_forward(&g, &s.x, &alphas, eps, k, &phi).unwrap();
        let gap = out.x.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-10, "gap {}", gap);
    }

    #[test]
    fn closed_gates_leave_features_alone(g in graph(20), k in 1..=3usize, seed in any::<u64>(), ed in any::<bool>()) {
        let mode = if ed { Mode::Ed } else { Mode::Nd };
        let mut p = EleneLParams::random(&config(mode, Pooling::MaskedMean, k, g.max_degree()), seed).unwrap();
        p.gamma_nd = 0.0;
        p.gamma_ed = 0.0;
        let s = random_state(&g, mode, k, 3, 2, seed);
        let out = layer_forward(&s, &p).unwrap();
        prop_assert_eq!(out.x, s.x);
        prop_assert_eq!(out.e, s.e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn analytic_gradients_match_differences(
        n in 2..10usize,
        p in 0.2..0.6f64,
        seed in any::<u64>(),
        k in 1..=2usize,
        ed in any::<bool>(),
        mean in any::<bool>(),
    ) {
        let g = erdos_renyi(n, p, seed);
        let mode = if ed { Mode::Ed } else { Mode::Nd };
        let pooling = if mean { Pooling::MaskedMean } else { Pooling::Sum };
        let params = EleneLParams::random(&config(mode, pooling, k, g.max_degree()), seed).unwrap();
        let s = random_state(&g, mode, k, 3, 2, seed ^ 1);
        let err = grad_check(&s, &params, 1e-5, seed).unwrap();
        prop_assert!(err < 1e-6, "error {}", err);
    }
}

#[test]
fn parameters_and_features_survive_files() {
    let g = erdos_renyi(12, 0.3, 1);
    let p = EleneLParams::random(&config(Mode::Ed, Pooling::Sum, 2, g.max_degree()), 3).unwrap();
    let back = EleneLParams::from_json(&p.to_json().unwrap()).unwrap();
    assert_eq!(back, p);
    let s = random_state(&g, Mode::Ed, 2, 3, 2, 4);
    let out = layer_forward(&s, &back).unwrap();
    let mut buf = Vec::new();
    write_features_csv(&out.x, &mut buf).unwrap();
    assert_eq!(read_features_csv(buf.as_slice()).unwrap(), out.x);
    assert_eq!(layer_forward(&s, &p).unwrap(), out);
}
