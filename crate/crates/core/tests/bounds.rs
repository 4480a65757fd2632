use proptest::prelude::*;

use eqcol_core::bounds::*;
use eqcol_core::coloring::oracle;
use eqcol_core::graph::{maximal_clique, Graph};
use eqcol_core::io::random_graph;

#[test]
fn naive_examples() {
    let (k, c) = naive_upper_bound(&Graph::new(6));
    assert_eq!((k, c.k()), (1, 1));
    assert_eq!(naive_upper_bound(&Graph::complete(5)).0, 5);
    let k33 = Graph::complete_bipartite(3, 3);
    let (k, c) = naive_upper_bound(&k33);
    assert_ne!(k, 3);
    assert!(c.is_equitable(&k33).unwrap());
}

#[test]
fn lower_bound_examples() {
    assert_eq!(lower_bound(&Graph::complete(6)), 6);
    assert_eq!(lower_bound(&Graph::cycle(5)), 2);
}

#[test]
fn labeling_examples() {
    // K4 on 1..4 plus a pendant vertex at 4.
    let mut edges: Vec<(usize, usize)> = Graph::complete(4).edges().collect();
    edges.push((4, 5));
    let g = Graph::from_edges(5, &edges).unwrap();
    let perm = label_vertices(&g);
    assert_eq!(perm[4], 5);
    let mut first: Vec<usize> = perm[..4].to_vec();
    first.sort_unstable();
    assert_eq!(first, [1, 2, 3, 4]);
    assert_eq!(invert(&perm).len(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn bounds_bracket_the_oracle(n in 1usize..=8, d in 0.0f64..=100.0, seed in any::<u64>()) {
        let g = random_graph(n, d, seed).unwrap();
        let (h, b) = initialize(&g).unwrap();
        let chi = oracle(&g).chi_eq;
        prop_assert!(b.lb <= chi && chi <= b.ub);
        prop_assert_eq!(b.ub_witness.k(), b.ub);
        prop_assert!(b.ub_witness.is_equitable(&h).unwrap());
        // The relabeled graph is isomorphic.
        prop_assert_eq!(h.num_edges(), g.num_edges());
        let mut da: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        let mut db: Vec<usize> = h.vertices().map(|v| h.degree(v)).collect();
        da.sort_unstable();
        db.sort_unstable();
        prop_assert_eq!(da, db);
        // Clique first, then non-increasing degrees.
        let q = b.clique_size;
        prop_assert_eq!(q, maximal_clique(&g).len());
        prop_assert!(h.is_clique(&(1..=q).collect::<Vec<_>>()));
        prop_assert!((q + 1..n).all(|v| h.degree(v) >= h.degree(v + 1)));
        for u in h.vertices() {
            let alpha = eqcol_core::graph::exact_alpha(&h, h.neighbors(u));
            prop_assert!(b.alpha_lo[u - 1] <= alpha && alpha <= b.alpha_hi[u - 1]);
        }
    }
}
