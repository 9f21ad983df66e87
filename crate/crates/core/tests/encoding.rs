mod common;

use common::{all_pairs, ed_oracle, nd_oracle, permutation, INF};
use elene::encode::{
    encode_edge_ed, encode_graph_ed_with_stats, encode_graph_nd_with_stats, encode_node_nd, NodeEncoder,
};
use elene::graph::generate::{erdos_renyi, random_regular};
use elene::graph::{bfs_levels, generate, Family};
use elene::vectorize::graph_signature;
use elene::{Graph, Mode};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.5f64, any::<u64>()).prop_map(|(n, p, seed)| erdos_renyi(n, p, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn levels_match_all_pairs(g in graph(64), k in 0..5usize) {
        let d = all_pairs(&g);
        for v in 0..g.node_count() {
            let levels = bfs_levels(&g, v, k).unwrap();
            for u in 0..g.node_count() {
                let expected = (d[v][u] <= k).then_some(d[v][u]);
                prop_assert_eq!(levels.dist.get(&u).copied(), expected);
            }
        }
    }

    #[test]
    fn node_encoding_matches_oracle(g in graph(32), k in 0..=3usize) {
        for v in 0..g.node_count() {
            let e = encode_node_nd(&g, v, k).unwrap();
            prop_assert_eq!(e.entries().to_vec(), nd_oracle(&g, v, k));
        }
    }

    #[test]
    fn degrees_decompose_and_sum_to_twice_the_edges(g in graph(32), k in 0..=3usize) {
        let d = all_pairs(&g);
        for v in 0..g.node_count() {
            let e = encode_node_nd(&g, v, k).unwrap();
            let mut degree_sum = 0;
            for (q, f) in e.entries() {
                prop_assert!(q.d_minus + q.d_plus <= q.d);
                prop_assert_eq!(q.d_minus + q.d_zero() + q.d_plus, q.d);
                degree_sum += *f * q.d as usize;
            }
            let induced = g.edges().iter().filter(|&&(a, b)| d[v][a] <= k && d[v][b] <= k).count();
            prop_assert_eq!(degree_sum, 2 * induced);
        }
    }

    #[test]
    fn edge_encoding_matches_oracle(g in graph(20), k in 1..=3usize) {
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            let e = encode_edge_ed(&g, id, k).unwrap();
            prop_assert_eq!(e.entries().to_vec(), ed_oracle(&g, u, v, k));
        }
    }

    #[test]
    fn edge_encoding_ignores_endpoint_order(g in graph(20), k in 1..=3usize) {
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            let mut swap: Vec<usize> = (0..g.node_count()).collect();
            swap.swap(u, v);
            let h = g.permute(&swap).unwrap();
            let moved = h.edge_id(v, u).unwrap();
            prop_assert_eq!(
                encode_edge_ed(&g, id, k).unwrap().entries().to_vec(),
                encode_edge_ed(&h, moved, k).unwrap().entries().to_vec()
            );
        }
    }

    #[test]
    fn relabeling_commutes_with_encoding(g in graph(32), k in 0..=3usize, seed in any::<u64>()) {
        let perm = permutation(g.node_count(), seed);
        let h = g.permute(&perm).unwrap();
        for v in 0..g.node_count() {
            prop_assert_eq!(
                encode_node_nd(&g, v, k).unwrap().entries().to_vec(),
                encode_node_nd(&h, perm[v], k).unwrap().entries().to_vec()
            );
        }
        prop_assert_eq!(graph_signature(&g, k, Mode::Nd).unwrap(), graph_signature(&h, k, Mode::Nd).unwrap());
        if k >= 1 {
            prop_assert_eq!(graph_signature(&g, k, Mode::Ed).unwrap(), graph_signature(&h, k, Mode::Ed).unwrap());
        }
    }

    #[test]
    fn traversal_is_bounded_per_root(g in graph(40), k in 0..=3usize) {
        let m = g.edge_count() as u64;
        let bound = m.min((g.max_degree() as u64).pow(k as u32));
        let mut enc = NodeEncoder::new(&g, k);
        let mut before = 0;
        for v in 0..g.node_count() {
            enc.encode(v).unwrap();
            let used = enc.edges_traversed() - before;
            prop_assert!(used <= bound, "root {} used {} > {}", v, used, bound);
            before = enc.edges_traversed();
        }
        let (_, stats) = encode_graph_nd_with_stats(&g, k, 3).unwrap();
        prop_assert_eq!(stats.edges_traversed, before);
    }
}

#[test]
fn traversal_bound_on_regular_and_scale_free_graphs() {
    for g in [
        random_regular(500, 12, 1, 100).unwrap(),
        generate(Family::BarabasiAlbert { n: 500, m_min: 3, seed: 2 }).unwrap(),
    ] {
        let n = g.node_count() as u64;
        for k in 1..=2 {
            let bound = (g.edge_count() as u64).min((g.max_degree() as u64).pow(k));
            let (_, nd) = encode_graph_nd_with_stats(&g, k as usize, 4).unwrap();
            assert!(nd.edges_traversed <= n * bound);
            let (_, ed) = encode_graph_ed_with_stats(&g, k as usize, 4).unwrap();
            assert!(ed.edges_traversed > nd.edges_traversed);
        }
    }
}

#[test]
fn unreachable_pairs_stay_outside_every_ball() {
    let g = erdos_renyi(30, 0.03, 11);
    let d = all_pairs(&g);
    for v in 0..30 {
        let levels = bfs_levels(&g, v, 30).unwrap();
        for u in 0..30 {
            assert_eq!(levels.dist.contains_key(&u), d[v][u] != INF);
        }
    }
}

#[test]
fn generated_graphs_are_simple_and_reproducible() {
    let families = [
        Family::Rook { n: 4 },
        Family::Shrikhande,
        Family::Cycle { n: 9 },
        Family::DisjointTriangles { t: 4 },
        Family::RandomRegular { n: 60, d: 5, seed: 8 },
        Family::BarabasiAlbert { n: 80, m_min: 3, seed: 8 },
    ];
    for f in families {
        let g = generate(f).unwrap();
        let degree_sum: usize = (0..g.node_count()).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count(), "{f:?}");
        for v in 0..g.node_count() {
            let row = g.neighbors(v);
            assert!(row.windows(2).all(|w| w[0] < w[1]));
            assert!(row.iter().all(|&u| u != v && g.neighbors(u).contains(&v)));
        }
        assert_eq!(generate(f).unwrap(), g);
    }
    let r = random_regular(60, 5, 8, 100).unwrap();
    assert!((0..60).all(|v| r.degree(v) == 5));
}
