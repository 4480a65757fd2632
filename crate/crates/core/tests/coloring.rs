use std::ops::ControlFlow;

use proptest::prelude::*;

use eqcol_core::coloring::*;
use eqcol_core::graph::Graph;
use eqcol_core::io::random_graph;

fn col(n: usize, classes: &[&[usize]]) -> EqColoring {
    EqColoring::new(n, classes.iter().map(|c| c.to_vec()).collect()).unwrap()
}

#[test]
fn equity_examples() {
    let k33 = Graph::complete_bipartite(3, 3);
    assert!(col(6, &[&[1, 2, 3], &[4, 5, 6]]).is_equitable(&k33).unwrap());
    assert!(!col(6, &[&[1, 2, 4], &[3, 5], &[6]]).is_equitable(&k33).unwrap());
    assert!(col(5, &[&[1, 3], &[2, 4], &[5]]).is_equitable(&Graph::cycle(5)).unwrap());
    assert!(col(5, &[&[1, 3], &[2, 4], &[5]]).is_equitable(&Graph::cycle(6)).is_err());
}

#[test]
fn swap_examples() {
    let c = col(5, &[&[1, 2], &[3], &[4, 5]]);
    assert_eq!(c.swap(&[2]).unwrap(), c);
    assert_eq!(c.swap(&[1, 3]).unwrap(), col(5, &[&[4, 5], &[3], &[1, 2]]));
    assert_eq!(c.swap(&[1, 3]).unwrap().swap(&[1, 3]).unwrap(), c);
    assert!(c.swap(&[1, 1]).is_err());
    assert!(c.swap(&[4]).is_err());
}

#[test]
fn intro_examples() {
    let c = col(5, &[&[1, 2], &[3, 4], &[5]]);
    assert_eq!(c.intro(1).unwrap(), col(5, &[&[2], &[3, 4], &[5], &[1]]));
    assert!(c.intro(5).is_err());
    let c6 = col(6, &[&[1], &[2], &[3, 4], &[5], &[6]]);
    assert_eq!(c6.intro(4).unwrap().k(), 6);
    // k below ⌈n/2⌉.
    assert!(col(6, &[&[1, 2], &[3, 4, 5, 6]]).intro(1).is_err());
}

#[test]
fn binary_embedding() {
    let p = EqColoring::singletons(4).to_binary();
    assert!((1..=4).all(|j| p.w(j) == 1));
    assert!((1..=4).all(|v| (1..=4).map(|j| p.x(v, j)).sum::<u8>() == 1));
    let k33 = Graph::complete_bipartite(3, 3);
    let c = col(6, &[&[1, 2, 3], &[4, 5, 6]]);
    let p = c.to_binary();
    assert_eq!((1..=6).map(|j| p.w(j)).collect::<Vec<_>>(), [1, 1, 0, 0, 0, 0]);
    let sums: Vec<u8> = (1..=6).map(|j| (1..=6).map(|v| p.x(v, j)).sum()).collect();
    assert_eq!(sums, [3, 3, 0, 0, 0, 0]);
    assert!(p.satisfies_formulation(&k33));
    assert_eq!(p.from_binary().unwrap(), c);
}

#[test]
fn existence_and_oracle() {
    let k33 = Graph::complete_bipartite(3, 3);
    assert!(exists_eqcol(&k33, 3).is_none());
    assert!(exists_eqcol(&k33, 2).unwrap().is_equitable(&k33).unwrap());
    assert_eq!(exists_eqcol(&k33, 6).unwrap().k(), 6);
    let o = oracle(&k33);
    assert_eq!((o.chi_eq, o.skip_set.as_slice(), o.monotone()), (2, &[3][..], false));
    assert!(oracle(&Graph::cycle(5)).monotone());
}

/// Labeled colorings counted as unordered partitions times `k!`.
fn count_by_partitions(g: &Graph) -> usize {
    (1..=g.n()).map(|k| partitions(g, k).len() * (1..=k).product::<usize>()).sum()
}

#[test]
fn enumeration_counts() {
    let k3 = Graph::complete(3);
    let points = enumerate_binary_points(&k3).unwrap();
    assert_eq!(points.len(), count_by_partitions(&k3));
    let c5 = Graph::cycle(5);
    let points = enumerate_binary_points(&c5).unwrap();
    assert_eq!(points.len(), count_by_partitions(&c5));
    assert_eq!(points.iter().filter(|p| p.w(5) == 1).count(), 120);
    assert!(points.iter().all(|p| p.satisfies_formulation(&c5)));
    assert!(enumerate_binary_points(&Graph::new(9)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colorings_above_max_degree_exist(n in 2usize..=8, d in 0.0f64..=100.0, seed in any::<u64>()) {
        let g = random_graph(n, d, seed).unwrap();
        for k in g.max_degree() + 1..=n {
            let c = exists_eqcol(&g, k);
            prop_assert!(c.is_some_and(|c| c.k() == k && c.is_equitable(&g).unwrap()), "k {}", k);
        }
    }

    #[test]
    fn operators_preserve_equity(n in 5usize..=8, d in 10.0f64..=60.0, seed in any::<u64>(), pick in any::<u64>()) {
        let g = random_graph(n, d, seed).unwrap();
        let mut count = 0;
        for_each_labeled(&g, |c| {
            count += 1;
            if count as u64 % 97 != pick % 97 {
                return ControlFlow::Continue(());
            }
            let k = c.k();
            let l: Vec<usize> = (1..=k).rev().collect();
            assert!(c.swap(&l).unwrap().is_equitable(&g).unwrap());
            if k >= n.div_ceil(2) && k < n {
                for v in g.vertices().filter(|&v| c.class(c.color_of(v)).len() == 2) {
                    let d = c.intro(v).unwrap();
                    assert!(d.is_equitable(&g).unwrap());
                    assert_eq!(d.color_of(v), k + 1);
                }
            }
            ControlFlow::Continue(())
        })
        .unwrap();
    }
}
