use proptest::prelude::*;

use eqcol_core::graph::Graph;
use eqcol_core::io::*;
use eqcol_core::Error;

#[test]
fn parses_a_path() {
    let g = parse_dimacs("c a path\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
    assert_eq!(g, Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap());
}

#[test]
fn duplicate_edges_collapse() {
    let g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n").unwrap();
    assert_eq!(g.num_edges(), 1);
}

#[test]
fn errors_carry_line_numbers() {
    let line = |text: &str| match parse_dimacs(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    };
    assert_eq!(line("p edge 3 2\ne 1 2\ne 1 4\n"), 3);
    assert_eq!(line("c no header\ne 1 2\n"), 2);
    assert_eq!(line("p edge 3 1\ne 1\n"), 2);
    assert_eq!(line("p edge 3 1\nx 1 2\n"), 2);
    assert_eq!(line("c only comments\n"), 1);
}

#[test]
fn random_graph_extremes_and_determinism() {
    assert_eq!(random_graph(9, 0.0, 1).unwrap().num_edges(), 0);
    assert_eq!(random_graph(9, 100.0, 1).unwrap(), Graph::complete(9));
    assert_eq!(random_graph(20, 50.0, 7).unwrap(), random_graph(20, 50.0, 7).unwrap());
    assert_ne!(random_graph(20, 50.0, 7).unwrap(), random_graph(20, 50.0, 8).unwrap());
    assert!(matches!(random_graph(5, 101.0, 1), Err(Error::InvalidConfig(_))));
}

#[test]
fn fixtures_match_their_edge_lists() {
    assert_eq!(fixture("k33").unwrap(), Graph::complete_bipartite(3, 3));
    assert_eq!(fixture("c5").unwrap(), Graph::cycle(5));
    let f1 = fig1();
    assert_eq!((f1.n(), f1.num_edges()), (11, 6 + 5 + 5 + 4));
    let f2 = fig2();
    assert_eq!((f2.n(), f2.num_edges()), (11, 10));
    assert!(FIXTURES.iter().all(|name| fixture(name).is_some()));
    assert!(fixture("petersen").is_none());
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(n in 1usize..=30, d in 0.0f64..=100.0, seed in any::<u64>()) {
        let g = random_graph(n, d, seed).unwrap();
        prop_assert_eq!(parse_dimacs(&write_dimacs(&g, Some("round trip\nsecond line"))).unwrap(), g);
    }
}
