//! Initial bounds on the equitable chromatic number and the vertex labeling
//! used by the model.

use crate::coloring::EqColoring;
use crate::error::Result;
use crate::graph::{clique_partition, maximal_clique, stability_bounds, Graph};

#[derive(Clone, Debug)]
pub struct InitBounds {
    pub lb: usize,
    pub ub: usize,
    /// An equitable coloring with `ub` colors, in the labeled graph.
    pub ub_witness: EqColoring,
    /// `labeling[old - 1]` is the new label of vertex `old`.
    pub labeling: Vec<usize>,
    /// Size of the clique placed first by the labeling (labels `1..=q`).
    pub clique_size: usize,
    /// Bounds on `α(N(u))`, indexed by `u - 1` in the labeled graph.
    pub alpha_lo: Vec<usize>,
    pub alpha_hi: Vec<usize>,
}

/// Greedy equitable coloring. Vertices are colored in label order with the
/// smallest non-conflicting class of minimum size, opening a class when none
/// fits. Classes are then balanced by moving single vertices from a class to
/// a smaller non-conflicting one whenever sizes differ by two or more; when
/// no such move exists a new empty class is added.
pub fn naive_upper_bound(g: &Graph) -> (usize, EqColoring) {
    let n = g.n();
    if n == 0 {
        return (0, EqColoring::singletons(0));
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 1..=n {
        let fits = |c: &Vec<usize>| c.iter().all(|&u| !g.has_edge(u, v));
        let pick = (0..classes.len()).filter(|&i| fits(&classes[i])).min_by_key(|&i| (classes[i].len(), i));
        match pick {
            Some(i) => classes[i].push(v),
            None => classes.push(vec![v]),
        }
    }
    loop {
        let max = classes.iter().map(Vec::len).max().unwrap();
        let min = classes.iter().map(Vec::len).min().unwrap();
        if max <= min + 1 {
            break;
        }
        // Move across the pair with the largest size gap (ties to the lowest
        // class indices).
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for a in 0..classes.len() {
            for b in 0..classes.len() {
                if classes[a].len() < classes[b].len() + 2 {
                    continue;
                }
                let gap = classes[a].len() - classes[b].len();
                if best.is_some_and(|(d, ..)| d >= gap) {
                    continue;
                }
                if let Some(&v) = classes[a].iter().find(|&&v| classes[b].iter().all(|&u| !g.has_edge(u, v))) {
                    best = Some((gap, a, b, v));
                }
            }
        }
        match best {
            Some((_, a, b, v)) => {
                classes[a].retain(|&u| u != v);
                classes[b].push(v);
            }
            None => classes.push(Vec::new()),
        }
    }
    let k = classes.len();
    let coloring = EqColoring::new(n, classes).expect("balanced greedy classes are non-empty");
    (k, coloring)
}

/// `max(|Q|, max_v ⌈(n+1) / (θ̄(G − N[v]) + 2)⌉)` with `Q` a maximal clique
/// and `θ̄` the greedy clique-partition size.
pub fn lower_bound(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let q = maximal_clique(g).len();
    let term = (1..=n)
        .map(|v| {
            let rest: Vec<usize> = (1..=n).filter(|&u| u != v && !g.has_edge(u, v)).collect();
            let theta = clique_partition(g, &rest).len();
            (n + 1).div_ceil(theta + 2)
        })
        .max()
        .unwrap();
    q.max(term)
}

/// Labels a maximal clique `1..=q` and the remaining vertices by
/// non-increasing degree (ties by original label). Returns `perm` with
/// `perm[old - 1] = new`.
pub fn label_vertices(g: &Graph) -> Vec<usize> {
    let clique = maximal_clique(g);
    let by_degree = |v: &usize| (std::cmp::Reverse(g.degree(*v)), *v);
    let mut first = clique.clone();
    first.sort_by_key(by_degree);
    let mut rest: Vec<usize> = g.vertices().filter(|v| !clique.contains(v)).collect();
    rest.sort_by_key(by_degree);
    let mut perm = vec![0; g.n()];
    for (i, v) in first.into_iter().chain(rest).enumerate() {
        perm[v - 1] = i + 1;
    }
    perm
}

/// Inverse of a labeling permutation.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p - 1] = i + 1;
    }
    inv
}

/// Relabels `g` and computes all initial bounds on the relabeled graph.
pub fn initialize(g: &Graph) -> Result<(Graph, InitBounds)> {
    let labeling = label_vertices(g);
    let h = g.relabel(&labeling);
    let clique_size = maximal_clique(g).len();
    let (ub, ub_witness) = naive_upper_bound(&h);
    let lb = lower_bound(&h);
    let (alpha_lo, alpha_hi) = h.vertices().map(|u| stability_bounds(&h, h.neighbors(u))).unzip();
    Ok((h, InitBounds { lb, ub, ub_witness, labeling, clique_size, alpha_lo, alpha_hi }))
}
