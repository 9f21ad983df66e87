mod common;

use common::{isomorphic, permutation};
use elene::encode::{encode_node_nd, intersect_ego, Quadruplet};
use elene::expressivity::{
    check_srg, elene_distinguish, srg_closed_form_igel, srg_closed_form_nd, wl1_distinguish, wl1_refine,
};
use elene::graph::generate::erdos_renyi;
use elene::graph::{diameter, ego_subgraph, generate, Family};
use elene::vectorize::{graph_signature, to_igel_vector};
use elene::{Graph, Mode};
use proptest::prelude::*;

fn family(f: Family) -> Graph {
    generate(f).unwrap()
}

#[test]
fn node_encodings_refine_color_refinement() {
    let mut pairs: Vec<(Graph, Graph)> = vec![
        (family(Family::Cycle { n: 6 }), family(Family::DisjointTriangles { t: 2 })),
        (family(Family::Rook { n: 4 }), family(Family::Shrikhande)),
        (family(Family::Cycle { n: 9 }), family(Family::DisjointTriangles { t: 3 })),
    ];
    for seed in 0..150u64 {
        let n = 4 + (seed % 9) as usize;
        let p = 0.2 + 0.05 * (seed % 5) as f64;
        let g = erdos_renyi(n, p, seed);
        let h = if seed % 3 == 0 {
            g.permute(&permutation(n, seed)).unwrap()
        } else {
            erdos_renyi(n, p, seed + 1000)
        };
        pairs.push((g, h));
    }
    let mut separated = 0;
    for (g, h) in &pairs {
        let iso = isomorphic(g, h);
        let k = diameter(g).max(diameter(h)).max(1);
        let elene = elene_distinguish(g, h, k, Mode::Nd).unwrap();
        if wl1_distinguish(g, h) {
            assert!(elene, "1-WL separates a pair the encoding does not");
        }
        if iso {
            assert!(!elene && !wl1_distinguish(g, h));
        }
        if elene {
            assert!(!iso);
            separated += 1;
        }
    }
    assert!(separated > 50);
    let (c6, tt) = (&pairs[0].0, &pairs[0].1);
    assert!(!wl1_distinguish(c6, tt));
    assert!(elene_distinguish(c6, tt, 1, Mode::Nd).unwrap());
}

#[test]
fn rook_graphs_follow_the_closed_form() {
    for n in 3..=5 {
        let g = family(Family::Rook { n });
        let p = check_srg(&g).unwrap();
        assert_eq!((p.n, p.d, p.lambda), (n * n, 2 * (n - 1), n - 2));
        assert_eq!(p.mu, 2);
        let closed = srg_closed_form_nd(p).unwrap();
        let d_max = g.max_degree();
        for v in 0..g.node_count() {
            assert_eq!(encode_node_nd(&g, v, 2).unwrap().entries(), closed.entries());
            for k in 1..=2 {
                let igel = to_igel_vector(&encode_node_nd(&g, v, k).unwrap(), k, d_max).unwrap();
                assert_eq!(igel, srg_closed_form_igel(p, k, d_max).unwrap());
            }
        }
    }
    let rook4 = srg_closed_form_nd(check_srg(&family(Family::Rook { n: 4 })).unwrap()).unwrap();
    assert_eq!(
        rook4.entries(),
        &[
            (Quadruplet::new(0, 0, 6, 6), 1),
            (Quadruplet::new(1, 1, 6, 3), 6),
            (Quadruplet::new(2, 2, 6, 0), 9)
        ]
    );
}

#[test]
fn rook_and_shrikhande_split_only_on_edges() {
    let (r, s) = (family(Family::Rook { n: 4 }), family(Family::Shrikhande));
    let (pr, ps) = (check_srg(&r).unwrap(), check_srg(&s).unwrap());
    assert_eq!(pr, ps);
    assert!(!wl1_distinguish(&r, &s));
    for k in 1..=2 {
        assert_eq!(graph_signature(&r, k, Mode::Nd).unwrap(), graph_signature(&s, k, Mode::Nd).unwrap());
    }
    assert_ne!(graph_signature(&r, 1, Mode::Ed).unwrap(), graph_signature(&s, 1, Mode::Ed).unwrap());
    for (g, edges) in [(&r, 6), (&s, 5)] {
        for &(u, v) in g.edges() {
            assert_eq!(intersect_ego(g, u, v, 1).unwrap().edges.len(), edges);
        }
        for v in 0..16 {
            let ego = ego_subgraph(g, v, 1).unwrap();
            assert_eq!((ego.nodes.len(), ego.edges.len()), (7, 12));
            assert_eq!(ego.degree_multiset().into_iter().collect::<Vec<_>>(), vec![(3, 6), (6, 1)]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn color_histogram_ignores_labels(n in 1..40usize, p in 0.0..0.4f64, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed);
        let h = g.permute(&permutation(n, seed ^ 7)).unwrap();
        let (a, b) = (wl1_refine(&g, 0), wl1_refine(&h, 0));
        prop_assert_eq!(a.histogram, b.histogram);
        prop_assert_eq!(a.rounds, b.rounds);
        prop_assert!(!wl1_distinguish(&g, &h));
    }
}
