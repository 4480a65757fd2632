//! Simple undirected graphs with 1-based vertex labels.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    nbrs: Vec<Vec<usize>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![false; n * n], nbrs: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..=n {
            g.add_edge(v, v % n + 1).unwrap();
        }
        g
    }

    /// Complete bipartite graph with sides `1..=a` and `a+1..=a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new(a + b);
        for u in 1..=a {
            for v in a + 1..=a + b {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn check(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Adds `{u, v}`; returns false if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Ok(false);
        }
        let n = self.n;
        self.adj[(u - 1) * n + (v - 1)] = true;
        self.adj[(v - 1) * n + (u - 1)] = true;
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.nbrs[a - 1];
            let at = list.partition_point(|&x| x < b);
            list.insert(at, b);
        }
        self.m += 1;
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[(u - 1) * self.n + (v - 1)]
    }

    /// Open neighborhood `N(u)`, sorted.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.nbrs[u - 1]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.nbrs[u - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |u| self.nbrs[u - 1].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Edge density in percent.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        100.0 * self.m as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    pub fn is_universal(&self, v: usize) -> bool {
        self.degree(v) + 1 == self.n
    }

    pub fn is_clique(&self, s: &[usize]) -> bool {
        s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    pub fn is_stable(&self, s: &[usize]) -> bool {
        s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// Renames vertex `v` to `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u - 1], perm[v - 1]).unwrap();
        }
        g
    }

    /// Whether the graph contains `K_{n-1}` as a subgraph.
    pub fn contains_near_complete(&self) -> bool {
        if self.n < 2 {
            return true;
        }
        (1..=self.n).any(|skip| {
            let rest: Vec<usize> = (1..=self.n).filter(|&v| v != skip).collect();
            self.is_clique(&rest)
        })
    }

    /// The standing assumptions under which the polyhedral results hold:
    /// at least five vertices and one edge, no universal vertex and no
    /// `K_{n-1}`.
    pub fn meets_standing_assumptions(&self) -> bool {
        self.n >= 5 && self.m >= 1 && !(1..=self.n).any(|v| self.is_universal(v)) && !self.contains_near_complete()
    }
}

/// Greedily grows `seed` to a maximal clique, always adding the candidate
/// ranked first by `prefer` (ties to the lowest label).
pub fn extend_clique(g: &Graph, seed: &[usize], mut prefer: impl FnMut(usize) -> f64) -> Vec<usize> {
    let mut q = seed.to_vec();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for v in 1..=g.n() {
            if q.contains(&v) || !q.iter().all(|&a| g.has_edge(a, v)) {
                continue;
            }
            let p = prefer(v);
            if best.is_none_or(|(_, b)| p > b) {
                best = Some((v, p));
            }
        }
        match best {
            Some((v, _)) => q.push(v),
            None => break,
        }
    }
    q.sort_unstable();
    q
}

/// A maximal clique grown from a highest-degree vertex by repeatedly adding
/// the highest-degree common neighbor.
pub fn maximal_clique(g: &Graph) -> Vec<usize> {
    if g.n() == 0 {
        return Vec::new();
    }
    let start = (1..=g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
    extend_clique(g, &[start], |v| g.degree(v) as f64)
}

/// Greedy partition of `subset` into cliques of `G[subset]`: each clique
/// starts at the lowest uncovered vertex and absorbs the uncovered common
/// neighbor of highest degree (within the subset) until none is left.
pub fn clique_partition(g: &Graph, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; g.n() + 1];
    for &v in subset {
        inside[v] = true;
    }
    let local_degree = |v: usize| g.neighbors(v).iter().filter(|&&u| inside[u]).count();
    let mut covered = vec![false; g.n() + 1];
    let mut order: Vec<usize> = subset.to_vec();
    order.sort_unstable();
    let mut parts = Vec::new();
    for &start in &order {
        if covered[start] {
            continue;
        }
        let mut clique = vec![start];
        covered[start] = true;
        loop {
            let next = order
                .iter()
                .copied()
                .filter(|&v| !covered[v] && clique.iter().all(|&a| g.has_edge(a, v)))
                .max_by_key(|&v| (local_degree(v), std::cmp::Reverse(v)));
            match next {
                Some(v) => {
                    covered[v] = true;
                    clique.push(v);
                }
                None => break,
            }
        }
        clique.sort_unstable();
        parts.push(clique);
    }
    parts
}

/// Size of the greedy clique partition of the whole graph; an upper bound on
/// the clique cover number.
pub fn clique_partition_number(g: &Graph) -> usize {
    let all: Vec<usize> = g.vertices().collect();
    clique_partition(g, &all).len()
}

/// Greedy stable set of `G[subset]`: repeatedly take a minimum-degree vertex
/// of the residual graph (ties to the lowest label) and delete its closed
/// neighborhood.
pub fn greedy_stable_set(g: &Graph, subset: &[usize]) -> Vec<usize> {
    let mut alive: Vec<usize> = subset.to_vec();
    alive.sort_unstable();
    alive.dedup();
    let mut stable = Vec::new();
    while !alive.is_empty() {
        let v = *alive.iter().min_by_key(|&&v| (alive.iter().filter(|&&u| g.has_edge(u, v)).count(), v)).unwrap();
        stable.push(v);
        alive.retain(|&u| u != v && !g.has_edge(u, v));
    }
    stable.sort_unstable();
    stable
}

/// `(lower, upper)` bounds on `α(G[s])` from a greedy stable set and a greedy
/// clique cover.
pub fn stability_bounds(g: &Graph, s: &[usize]) -> (usize, usize) {
    if s.is_empty() {
        return (0, 0);
    }
    (greedy_stable_set(g, s).len(), clique_partition(g, s).len())
}

/// Exact stability number of `G[s]` by branch and bound. Intended for small
/// sets only.
pub fn exact_alpha(g: &Graph, s: &[usize]) -> usize {
    fn go(g: &Graph, cand: &[usize], size: usize, best: &mut usize) {
        if size + cand.len() <= *best {
            return;
        }
        let Some((&v, rest)) = cand.split_first() else {
            *best = (*best).max(size);
            return;
        };
        let without: Vec<usize> = rest.iter().copied().filter(|&u| !g.has_edge(u, v)).collect();
        go(g, &without, size + 1, best);
        go(g, rest, size, best);
    }
    let mut cand = s.to_vec();
    cand.sort_unstable();
    cand.dedup();
    let mut best = 0;
    go(g, &cand, 0, &mut best);
    best
}

/// Whether `s` is α-maximal: no outside vertex can join without raising α.
pub fn is_alpha_maximal(g: &Graph, s: &[usize]) -> bool {
    let a = exact_alpha(g, s);
    (1..=g.n()).filter(|v| !s.contains(v)).all(|v| {
        let mut t = s.to_vec();
        t.push(v);
        exact_alpha(g, &t) > a
    })
}

/// Minimum number of cliques covering `V`, by exhaustive search (tests only).
pub fn exact_clique_cover(g: &Graph) -> usize {
    exact_alpha_cover(&g.complement())
}

fn exact_alpha_cover(h: &Graph) -> usize {
    // Clique cover of G = chromatic number of the complement `h`.
    let n = h.n();
    if n == 0 {
        return 0;
    }
    let mut color = vec![0usize; n + 1];
    fn fits(h: &Graph, color: &[usize], v: usize, c: usize) -> bool {
        h.neighbors(v).iter().all(|&u| u >= v || color[u] != c)
    }
    fn go(h: &Graph, color: &mut Vec<usize>, v: usize, used: usize, k: usize) -> bool {
        if v > h.n() {
            return true;
        }
        for c in 1..=(used + 1).min(k) {
            if fits(h, color, v, c) {
                color[v] = c;
                if go(h, color, v + 1, used.max(c), k) {
                    return true;
                }
            }
        }
        color[v] = 0;
        false
    }
    (1..=n).find(|&k| go(h, &mut color, 1, 0, k)).unwrap()
}
