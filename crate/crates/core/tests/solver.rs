use std::time::Duration;

use eqcol_core::coloring::oracle;
use eqcol_core::graph::Graph;
use eqcol_core::io::{fig1, fig2, random_graph};
use eqcol_core::lp::EngineChoice;
use eqcol_core::separation::Strategy;
use eqcol_core::solver::*;

fn solve(g: &Graph, strategy: Strategy) -> SolveReport {
    let config = SolveConfig { strategy, ..SolveConfig::default() };
    cut_and_branch(g, &config).unwrap()
}

#[test]
fn fixtures_solve_to_known_values() {
    let k33 = Graph::complete_bipartite(3, 3);
    let o = oracle(&k33);
    assert_eq!((o.chi_eq, o.skip_set.clone()), (2, vec![3]));
    for (g, chi) in [(k33, 2), (Graph::cycle(5), 3), (fig2(), 3), (fig1(), 5)] {
        let r = solve(&g, Strategy::standard(4).unwrap());
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.chi_eq, Some(chi));
        assert_eq!(r.incumbent.k(), chi);
        assert!(r.incumbent.is_equitable(&g).unwrap());
    }
}

#[test]
fn fixtures_need_the_ilp() {
    // None of the fixtures is decided by presolve.
    for g in [Graph::complete_bipartite(3, 3), fig1(), fig2()] {
        assert!(presolve(&g).is_none());
        assert!(!solve(&g, Strategy::standard(4).unwrap()).presolved);
    }
}

#[test]
fn matches_oracle_on_small_random_graphs() {
    for seed in 1..=40 {
        let density = 10.0 + 20.0 * (seed % 5) as f64;
        let g = random_graph(7, density, seed).unwrap();
        let expected = oracle(&g).chi_eq;
        for strategy in [Strategy::none(), Strategy::standard(1).unwrap(), Strategy::standard(7).unwrap()] {
            let r = solve(&g, strategy.clone());
            assert_eq!(r.chi_eq, Some(expected), "seed {seed} density {density} {strategy}");
        }
    }
}

#[test]
fn presolve_handles_universal_vertices() {
    // A star: the centre is alone, leaves pair up.
    let star = Graph::from_edges(6, &(2..=6).map(|v| (1, v)).collect::<Vec<_>>()).unwrap();
    let (k, c) = presolve(&star).unwrap();
    assert_eq!(k, 1 + 3);
    assert!(c.is_equitable(&star).unwrap());
    assert_eq!(k, oracle(&star).chi_eq);
    assert_eq!(presolve(&Graph::new(4)).unwrap().0, 1);
    assert_eq!(presolve(&Graph::complete(5)).unwrap().0, 5);
}

#[test]
fn root_loop_is_monotone_and_nonnegative() {
    for seed in 1..=4 {
        let g = random_graph(20, 50.0, seed).unwrap();
        for i in 1..=7 {
            let (_, r) = root_cut_loop(&g, &Strategy::standard(i).unwrap(), 10, &EngineChoice::Embedded).unwrap();
            assert!(r.is_monotone());
            assert!(r.impr >= 0);
            assert_eq!(r.lb_trajectory.len(), 11);
            assert!(r.cuts_trajectory.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(r.cuts.len(), *r.cuts_trajectory.last().unwrap());
        }
    }
}

#[test]
fn no_strategy_means_no_cuts() {
    let g = random_graph(15, 50.0, 3).unwrap();
    let (_, r) = root_cut_loop(&g, &Strategy::none(), 30, &EngineChoice::Embedded).unwrap();
    assert_eq!(r.impr, 0);
    assert!(r.cuts.is_empty());
}

#[test]
fn node_limit_reports_time_limit() {
    let g = random_graph(40, 50.0, 9).unwrap();
    let config = SolveConfig {
        strategy: Strategy::none(),
        rounds: 0,
        limits: Limits { time: Some(Duration::from_millis(1)), nodes: Some(1) },
        ..SolveConfig::default()
    };
    let r = cut_and_branch(&g, &config).unwrap();
    if r.status == SolveStatus::TimeLimit {
        assert_eq!(r.chi_eq, None);
        assert!(r.lower_bound <= r.best);
    }
    assert!(r.incumbent.is_equitable(&g).unwrap());
}

#[test]
fn round_bound_absorbs_noise() {
    assert_eq!(round_bound(3.0000001), 3);
    assert_eq!(round_bound(3.01), 4);
    assert_eq!(round_bound(2.9999999), 3);
}
