use eqcol_core::coloring::{exists_eqcol, oracle};
use eqcol_core::cuts::{block_cut, clique_cut, nonneg_row, outside_neighborhood_cut, rank_cut, subneighborhood_cut};
use eqcol_core::graph::{exact_alpha, Graph};
use eqcol_core::io::{fig1, fig2, random_graph};
use eqcol_core::polytope::*;
use eqcol_core::Error;

#[test]
fn dimensions_of_fixtures() {
    assert_eq!(ecp_dimension(&Graph::cycle(5)), 21);
    assert_eq!(ecp_dimension(&Graph::complete_bipartite(3, 3)), 32);
    assert_eq!(ecp_dimension(&fig2()), 117);
}

#[test]
fn family_sizes_and_independence() {
    for (g, size) in [(Graph::cycle(5), 22), (Graph::complete_bipartite(3, 3), 33), (fig2(), 118)] {
        let fam = independent_family(&g).unwrap();
        assert_eq!(fam.len(), size);
        assert_eq!(fam.rank(), size);
    }
}

#[test]
fn family_refuses_outside_assumptions() {
    assert!(matches!(independent_family(&Graph::complete(5)), Err(Error::Assumptions(_))));
    // C4 has only four vertices.
    assert!(matches!(independent_family(&Graph::cycle(4)), Err(Error::Assumptions(_))));
}

#[test]
fn full_dimension_path() {
    let r = verify_dimension(&Graph::cycle(5)).unwrap();
    assert_eq!(r.path, DimensionPath::Full);
    assert!(r.holds());
    assert_eq!(r.rank, 22);

    let k33 = Graph::complete_bipartite(3, 3);
    let r = verify_dimension(&k33).unwrap();
    assert!(r.holds());
    for p in eqcol_core::coloring::enumerate_binary_points(&k33).unwrap() {
        assert_eq!(p.w(3), p.w(4));
    }
}

#[test]
fn family_dimension_path() {
    let r = verify_dimension(&fig2()).unwrap();
    assert_eq!(r.path, DimensionPath::Family);
    assert!(r.holds(), "{r:?}");
}

#[test]
fn rank_accumulator_basics() {
    let mut r = AffineRank::new(3);
    assert!(r.insert_support(&[0, 1]));
    assert!(!r.insert_support(&[0, 1]));
    assert!(r.insert_support(&[0, 2]));
    assert!(!r.contains_support(&[0]));
    assert!(r.contains_support(&[0, 1]));
    assert!(r.insert_support(&[1, 2]));
    assert_eq!(r.rank(), 3);
    assert!(r.contains_support(&[0]));
}

#[test]
fn nonneg_rows_are_facets_on_c5() {
    let g = Graph::cycle(5);
    for v in 1..=5 {
        for j in 1..=5 {
            let row = nonneg_row(v, j, 5).unwrap();
            let verdict = verify_face(&g, &row, None).unwrap();
            assert!(verdict.exhaustive);
            assert_eq!(verdict.status, FaceStatus::FacetVerified, "x{v}_{j}");
        }
    }
}

#[test]
fn second_block_shares_the_face_of_first_nonneg() {
    let g = Graph::cycle(5);
    for v in 1..=5 {
        let a = face_points(&g, &block_cut(v, 2, 5).unwrap()).unwrap();
        let b = face_points(&g, &nonneg_row(v, 1, 5).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn invalid_row_is_reported() {
    let g = Graph::cycle(5);
    // Σ_v x_v1 ≤ w_1 claims color 1 holds one vertex.
    let row = eqcol_core::cuts::CutRow::canonical(
        eqcol_core::cuts::Family::Custom,
        Default::default(),
        5,
        (1..=5).map(|v| (eqcol_core::cuts::Var::X(v, 1), 1)).chain([(eqcol_core::cuts::Var::W(1), -1)]),
        0,
    );
    let verdict = verify_face(&g, &row, None).unwrap();
    assert_eq!(verdict.status, FaceStatus::Invalid);
    assert!(row.slack_coloring(verdict.violator.as_ref().unwrap()) > 0);
}

#[test]
fn clique_rows_are_facets_on_c5() {
    let g = Graph::cycle(5);
    for (u, v) in g.edges() {
        for j in 1..=4 {
            let row = clique_cut(&g, &[u, v], j).unwrap();
            assert_eq!(verify_face(&g, &row, None).unwrap().status, FaceStatus::FacetVerified);
        }
    }
}

#[test]
fn block_facets_follow_existence_of_smaller_colorings() {
    for seed in 1..=3 {
        let g = random_graph(7, 40.0, seed).unwrap();
        for j in 3..=5 {
            let expected = exists_eqcol(&g, j - 1).is_some();
            for v in j..=7 {
                let verdict = verify_face(&g, &block_cut(v, j, 7).unwrap(), None).unwrap();
                assert_eq!(verdict.status == FaceStatus::FacetVerified, expected, "seed {seed} v {v} j {j}");
            }
        }
    }
}

#[test]
fn identical_rows_have_equal_faces() {
    let g = Graph::cycle(5);
    let row = clique_cut(&g, &[1, 2], 2).unwrap();
    assert!(face_dims_equal(&g, &row, &row, None).unwrap());
}

#[test]
fn facet_and_lower_face_differ() {
    let g = Graph::cycle(5);
    // x_15 ≥ 0 holds with equality everywhere but the 5-colorings; x_11 ≥ 0
    // is a facet.
    let facet = nonneg_row(1, 1, 5).unwrap();
    let block = block_cut(1, 5, 5).unwrap();
    let a = verify_face(&g, &facet, None).unwrap();
    let b = verify_face(&g, &block, None).unwrap();
    assert_eq!(a.status, FaceStatus::FacetVerified);
    assert_ne!(b.status, FaceStatus::FacetVerified);
    assert!(!face_dims_equal(&g, &facet, &block, None).unwrap());
}

/// Seeded `n = 7` graphs with `χ_eq ≥ 3` and a vertex whose neighborhood
/// holds a stable set of size at least `⌈n/χ_eq⌉`.
fn graphs_with_wide_neighborhoods() -> Vec<(Graph, usize, usize)> {
    let mut out = Vec::new();
    for seed in 1..=400 {
        let g = random_graph(7, 55.0, seed).unwrap();
        let chi = oracle(&g).chi_eq;
        if chi < 3 {
            continue;
        }
        if let Some(u) = g.vertices().find(|&u| exact_alpha(&g, g.neighbors(u)) >= 7usize.div_ceil(chi)) {
            out.push((g, u, chi));
        }
        if out.len() == 2 {
            break;
        }
    }
    out
}

#[test]
fn subneighborhood_faces_match_below_chi() {
    let battery = graphs_with_wide_neighborhoods();
    assert!(!battery.is_empty());
    for (g, u, chi) in battery {
        let s = g.neighbors(u).to_vec();
        let alpha = exact_alpha(&g, &s);
        let base = subneighborhood_cut(&g, u, chi, &s, alpha, chi).unwrap();
        for j in (1..chi).filter(|&j| 7usize.div_ceil(j) > 7usize.div_ceil(chi)) {
            let row = subneighborhood_cut(&g, u, j, &s, alpha, chi).unwrap();
            assert_ne!(row, base);
            assert!(face_dims_equal(&g, &row, &base, None).unwrap(), "u {u} j {j}");
        }
    }
}

#[test]
fn outside_neighborhood_faces_match_below_chi() {
    for (g, u, chi) in graphs_with_wide_neighborhoods() {
        if chi > 3 {
            continue;
        }
        let base = outside_neighborhood_cut(&g, u, chi, chi).unwrap();
        for j in 1..chi {
            let row = outside_neighborhood_cut(&g, u, j, chi).unwrap();
            assert!(face_dims_equal(&g, &row, &base, None).unwrap(), "u {u} j {j}");
        }
    }
}

#[test]
fn appendix_rank_row_on_fig1() {
    let g = fig1();
    let s: Vec<usize> = (1..=7).collect();
    let alpha = exact_alpha(&g, &s);
    let row = rank_cut(&s, 3, alpha, 11).unwrap();
    let verdict = verify_face(&g, &row, None).unwrap();
    assert_eq!(verdict.status, FaceStatus::FacetVerified, "{}/{}", verdict.rank, verdict.dim_ecp);
}
