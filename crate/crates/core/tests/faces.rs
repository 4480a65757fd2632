//! Face membership characterizations and face dimension lower bounds on
//! small enumerable graphs.
// Bounds are written `rank − 1 ≥ dim − bound`, the shape of their statements.
#![allow(clippy::int_plus_one)]

use std::ops::ControlFlow;

use eqcol_core::coloring::{for_each_labeled, oracle, EqColoring, OracleResult};
use eqcol_core::cuts::{clique_neighborhood_cut, outside_neighborhood_cut, s_color_cut, subneighborhood_cut};
use eqcol_core::graph::{exact_alpha, Graph};
use eqcol_core::io::random_graph;
use eqcol_core::polytope::*;

fn battery() -> Vec<(Graph, OracleResult)> {
    let mut out = Vec::new();
    for seed in 1..=200 {
        let g = random_graph(7, 45.0, seed).unwrap();
        let o = oracle(&g);
        if g.meets_standing_assumptions() && o.chi_eq >= 2 && o.chi_eq <= 5 {
            out.push((g, o));
        }
        if out.len() == 3 {
            break;
        }
    }
    assert_eq!(out.len(), 3);
    out
}

fn labeled(g: &Graph) -> Vec<EqColoring> {
    let mut out = Vec::new();
    for_each_labeled(g, |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

fn has_stable_pair(g: &Graph, s: &[usize]) -> bool {
    s.iter().any(|&a| s.iter().any(|&b| a < b && !g.has_edge(a, b)))
}

#[test]
fn outside_neighborhood_face_characterization() {
    for (g, o) in battery() {
        let n = g.n();
        let points = labeled(&g);
        for u in g.vertices() {
            for j in 1..=n / 2 {
                let row = outside_neighborhood_cut(&g, u, j, o.chi_eq).unwrap();
                for c in &points {
                    let slack = row.slack_coloring(c);
                    assert!(slack <= 0);
                    assert_eq!(slack == 0, on_outside_neighborhood_face(&g, u, j, o.chi_eq, c), "u {u} j {j} {:?}", c.colors());
                }
            }
        }
    }
}

#[test]
fn clique_neighborhood_face_characterization() {
    let mut checked = 0;
    for (g, _) in battery() {
        let n = g.n();
        let points = labeled(&g);
        for u in g.vertices() {
            let alpha = exact_alpha(&g, g.neighbors(u));
            let outside: Vec<usize> = g.vertices().filter(|&v| v != u && !g.has_edge(u, v)).collect();
            let mut cliques: Vec<Vec<usize>> = outside.iter().map(|&v| vec![v]).collect();
            for &a in &outside {
                for &b in outside.iter().filter(|&&b| b > a && g.has_edge(a, b)) {
                    cliques.push(vec![a, b]);
                }
            }
            for k in 3..=alpha + 1 {
                for j in 1..n.div_ceil(k - 1) {
                    for q in &cliques {
                        let row = clique_neighborhood_cut(&g, u, j, k, q, alpha).unwrap();
                        for c in &points {
                            let slack = row.slack_coloring(c);
                            assert!(slack <= 0);
                            assert_eq!(
                                slack == 0,
                                on_clique_neighborhood_face(&g, u, j, k, q, alpha, c),
                                "u {u} j {j} k {k} Q {q:?} {:?}",
                                c.colors()
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn outside_neighborhood_facets_need_wide_neighborhoods() {
    for (g, o) in battery() {
        let n = g.n();
        for u in g.vertices() {
            for j in 1..=n / 2 {
                let row = outside_neighborhood_cut(&g, u, j, o.chi_eq).unwrap();
                let verdict = verify_face_with(&g, &o, &row, None).unwrap();
                if verdict.status == FaceStatus::FacetVerified {
                    assert!(exact_alpha(&g, g.neighbors(u)) >= n / j.max(o.chi_eq), "u {u} j {j}");
                }
            }
        }
    }
}

#[test]
fn face_dimension_lower_bounds() {
    for (g, o) in battery() {
        let n = g.n();
        let dim = dimension_from(n, &o) as i64;
        let skip = o.skip_set.len() as i64;
        let chi = o.chi_eq as i64;
        let ni = n as i64;
        let rank = |row: &eqcol_core::cuts::CutRow| verify_face_with(&g, &o, row, None).unwrap().rank as i64;
        for u in g.vertices() {
            let nbhd = g.neighbors(u).to_vec();
            let delta = nbhd.len() as i64;
            let wide = has_stable_pair(&g, &nbhd);
            let has_outside = g.vertices().any(|v| v != u && !g.has_edge(u, v));
            if wide {
                let alpha = exact_alpha(&g, &nbhd);
                for j in 1..n {
                    let row = subneighborhood_cut(&g, u, j, &nbhd, alpha, o.chi_eq).unwrap();
                    let bound = (ni + 1) / 2 - 1 - nbhd.len() as i64 + delta;
                    assert!(rank(&row) - 1 >= dim - bound, "subneighborhood u {u} j {j}");
                }
            }
            if wide && has_outside {
                for j in 1..=n / 2 {
                    let row = outside_neighborhood_cut(&g, u, j, o.chi_eq).unwrap();
                    let bound = 3 * ni - (ni + 1) / 2 - skip - chi - 4 - delta;
                    assert!(rank(&row) - 1 >= dim - bound, "outside-neighborhood u {u} j {j}");
                }
                let alpha = exact_alpha(&g, &nbhd);
                let q = g.vertices().find(|&v| v != u && !g.has_edge(u, v)).unwrap();
                for k in 3..=alpha + 1 {
                    for j in 1..n.div_ceil(k - 1) {
                        let row = clique_neighborhood_cut(&g, u, j, k, &[q], alpha).unwrap();
                        let bound = 3 * ni - skip - chi - ni / 2 - delta - 1 - 4;
                        assert!(rank(&row) - 1 >= dim - bound, "clique-neighborhood u {u} j {j} k {k}");
                    }
                }
            }
        }
        for mask in 1u32..(1 << (n - 1)) {
            let s: Vec<usize> = (1..n).filter(|&j| mask & (1 << (j - 1)) != 0).collect();
            if s.len() > 3 {
                continue;
            }
            let row = s_color_cut(&s, n).unwrap();
            let bound = ni - s.len() as i64 - 1;
            assert!(rank(&row) - 1 >= dim - bound, "S-color {s:?}");
        }
    }
}
