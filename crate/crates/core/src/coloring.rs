//! Equitable colorings, the label operators `swap` and `intro`, the 0/1
//! embedding and the exhaustive existence oracle.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A coloring given by its classes; `classes[j - 1]` is the class of color `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EqColoring {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl EqColoring {
    /// Builds a coloring from classes that must partition `1..=n` into
    /// non-empty sets. Equity and properness are checked separately.
    pub fn new(n: usize, mut classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for class in &mut classes {
            if class.is_empty() {
                return Err(Error::InvalidColoring("empty color class".into()));
            }
            class.sort_unstable();
            for &v in class.iter() {
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if seen[v] {
                    return Err(Error::InvalidColoring(format!("vertex {v} colored twice")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = (1..=n).find(|&v| !seen[v]) {
            return Err(Error::InvalidColoring(format!("vertex {v} uncolored")));
        }
        Ok(EqColoring { n, classes })
    }

    /// From a color per vertex (`colors[v - 1]`); colors must be exactly `1..=k`.
    pub fn from_colors(colors: &[usize]) -> Result<Self> {
        let k = colors.iter().copied().max().unwrap_or(0);
        let mut classes = vec![Vec::new(); k];
        for (i, &c) in colors.iter().enumerate() {
            if c == 0 {
                return Err(Error::InvalidColoring(format!("vertex {} has color 0", i + 1)));
            }
            classes[c - 1].push(i + 1);
        }
        EqColoring::new(colors.len(), classes)
    }

    /// The coloring with every vertex in its own class, `c(v) = v`.
    pub fn singletons(n: usize) -> Self {
        EqColoring { n, classes: (1..=n).map(|v| vec![v]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class of color `j` (1-based).
    pub fn class(&self, j: usize) -> &[usize] {
        &self.classes[j - 1]
    }

    pub fn colors(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for (j, class) in self.classes.iter().enumerate() {
            for &v in class {
                c[v - 1] = j + 1;
            }
        }
        c
    }

    pub fn color_of(&self, v: usize) -> usize {
        self.classes.iter().position(|c| c.binary_search(&v).is_ok()).expect("vertex out of range") + 1
    }

    /// Whether all class sizes lie in `{⌊n/k⌋, ⌈n/k⌉}`.
    pub fn sizes_equitable(&self) -> bool {
        let k = self.k();
        if k == 0 {
            return self.n == 0;
        }
        let (lo, hi) = (self.n / k, self.n.div_ceil(k));
        self.classes.iter().all(|c| (lo..=hi).contains(&c.len()))
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.classes.iter().all(|c| g.is_stable(c))
    }

    pub fn is_equitable(&self, g: &Graph) -> Result<bool> {
        if g.n() != self.n {
            return Err(Error::InvalidColoring(format!("coloring has {} vertices, graph {}", self.n, g.n())));
        }
        Ok(self.sizes_equitable() && self.is_proper(g))
    }

    /// `swap_L`: class `L[t]` receives the old class `L[t+1]` and the last
    /// color of `L` receives the old class `L[0]`.
    pub fn swap(&self, l: &[usize]) -> Result<Self> {
        for (i, &j) in l.iter().enumerate() {
            if j == 0 || j > self.k() {
                return Err(Error::InvalidColoring(format!("color {j} out of range 1..={}", self.k())));
            }
            if l[..i].contains(&j) {
                return Err(Error::InvalidColoring(format!("color {j} repeated in swap list")));
            }
        }
        let mut out = self.clone();
        let r = l.len();
        for t in 0..r {
            out.classes[l[t] - 1] = self.classes[l[(t + 1) % r] - 1].clone();
        }
        Ok(out)
    }

    /// `intro(c, v)`: moves `v`, which shares its class with exactly one other
    /// vertex, to the new color `k + 1`. Requires `⌈n/2⌉ ≤ k ≤ n − 1`.
    pub fn intro(&self, v: usize) -> Result<Self> {
        let k = self.k();
        if k < self.n.div_ceil(2) || k + 1 > self.n {
            return Err(Error::InvalidColoring(format!("intro needs ⌈n/2⌉ ≤ k ≤ n−1, got k = {k}")));
        }
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        let j = self.color_of(v);
        if self.classes[j - 1].len() != 2 {
            return Err(Error::InvalidColoring(format!("vertex {v} is not in a two-vertex class")));
        }
        let mut out = self.clone();
        out.classes[j - 1].retain(|&u| u != v);
        out.classes.push(vec![v]);
        Ok(out)
    }

    pub fn to_binary(&self) -> BinaryPoint {
        let n = self.n;
        let mut p = BinaryPoint { n, x: vec![0; n * n], w: vec![0; n] };
        for (j, class) in self.classes.iter().enumerate() {
            p.w[j] = 1;
            for &v in class {
                p.x[(v - 1) * n + j] = 1;
            }
        }
        p
    }

    /// Recolors class `i` (0-based) with color `perm[i] + 1`; `perm` must be a
    /// permutation of `0..k`.
    pub fn relabel_colors(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.k());
        let mut classes = vec![Vec::new(); self.k()];
        for (class, &j) in self.classes.iter().zip(perm) {
            classes[j] = class.clone();
        }
        EqColoring { n: self.n, classes }
    }

    /// Renames vertex `v` to `perm[v - 1]`, keeping colors.
    pub fn relabel_vertices(&self, perm: &[usize]) -> Self {
        let classes = self.classes.iter().map(|c| c.iter().map(|&v| perm[v - 1]).collect()).collect();
        EqColoring::new(self.n, classes).expect("relabeling a partition yields a partition")
    }
}

/// A 0/1 point `(x, w)` in the full `n`-color space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryPoint {
    pub n: usize,
    /// Row-major `x[(v - 1) * n + (j - 1)]`.
    pub x: Vec<u8>,
    pub w: Vec<u8>,
}

impl BinaryPoint {
    pub fn x(&self, v: usize, j: usize) -> u8 {
        self.x[(v - 1) * self.n + (j - 1)]
    }

    /// `w_j`, with `w_{n+1} = 0`.
    pub fn w(&self, j: usize) -> u8 {
        if j > self.n {
            0
        } else {
            self.w[j - 1]
        }
    }

    pub fn from_binary(&self) -> Result<EqColoring> {
        let n = self.n;
        let k = self.w.iter().filter(|&&b| b == 1).count();
        if self.w[..k].iter().any(|&b| b != 1) {
            return Err(Error::InvalidColoring("w is not a prefix of ones".into()));
        }
        let mut colors = vec![0; n];
        for v in 1..=n {
            let js: Vec<usize> = (1..=n).filter(|&j| self.x(v, j) == 1).collect();
            if js.len() != 1 || js[0] > k {
                return Err(Error::InvalidColoring(format!("vertex {v} has colors {js:?} with k = {k}")));
            }
            colors[v - 1] = js[0];
        }
        let c = EqColoring::from_colors(&colors)?;
        if c.k() != k {
            return Err(Error::InvalidColoring("unused color below k".into()));
        }
        Ok(c)
    }

    /// Checks assignment, edge, ordering, isolated-vertex and both equity
    /// constraints of the formulation (dummy `w_{n+1} = 0`).
    pub fn satisfies_formulation(&self, g: &Graph) -> bool {
        let n = self.n;
        let x = |v: usize, j: usize| self.x(v, j) as i64;
        let w = |j: usize| self.w(j) as i64;
        let assign = (1..=n).all(|v| (1..=n).map(|j| x(v, j)).sum::<i64>() == 1);
        let edges = g.edges().all(|(u, v)| (1..=n).all(|j| x(u, j) + x(v, j) <= w(j)));
        let order = (1..n).all(|j| w(j + 1) <= w(j));
        let isolated = (1..=n).filter(|&v| g.degree(v) == 0).all(|v| (1..=n).all(|j| x(v, j) <= w(j)));
        let equity = (1..n).all(|j| {
            let col: i64 = (1..=n).map(|v| x(v, j)).sum();
            let lo: i64 = (j..=n).map(|k| (n / k) as i64 * (w(k) - w(k + 1))).sum();
            let hi: i64 = (j..=n).map(|k| n.div_ceil(k) as i64 * (w(k) - w(k + 1))).sum();
            lo <= col && col <= hi
        });
        assign && edges && order && isolated && equity
    }

    /// Indices of the ones of the homogenized vector `(1, x, w)`.
    pub fn support(&self) -> Vec<usize> {
        let n = self.n;
        let mut s = vec![0];
        s.extend(self.x.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| 1 + i));
        s.extend(self.w.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| 1 + n * n + i));
        s
    }
}

/// Backtracking search over unordered equitable partitions into exactly `k`
/// stable classes. Vertices are placed in descending-degree order; a new
/// class is only opened as the next unused one, so each partition is visited
/// once.
struct PartitionSearch<'a> {
    g: &'a Graph,
    k: usize,
    floor: usize,
    big: usize,
    order: Vec<usize>,
    classes: Vec<Vec<usize>>,
    full: usize,
}

impl<'a> PartitionSearch<'a> {
    fn new(g: &'a Graph, k: usize, order: Vec<usize>) -> Self {
        let n = g.n();
        PartitionSearch { g, k, floor: n / k, big: n % k, order, classes: Vec::with_capacity(k), full: 0 }
    }

    fn cap(&self) -> usize {
        if self.big == 0 {
            self.floor
        } else {
            self.floor + 1
        }
    }

    fn run<F: FnMut(&[Vec<usize>]) -> ControlFlow<()>>(
        &mut self,
        i: usize,
        choose: &mut dyn FnMut(usize) -> Vec<usize>,
        f: &mut F,
    ) -> ControlFlow<()> {
        let remaining = self.order.len() - i;
        let deficit: usize = self.classes.iter().map(|c| self.floor.saturating_sub(c.len())).sum::<usize>()
            + (self.k - self.classes.len()) * self.floor.max(1);
        if deficit > remaining {
            return ControlFlow::Continue(());
        }
        if i == self.order.len() {
            if self.classes.len() == self.k {
                return f(&self.classes);
            }
            return ControlFlow::Continue(());
        }
        let v = self.order[i];
        let cap = self.cap();
        let slots = self.classes.len() + usize::from(self.classes.len() < self.k);
        for c in choose(slots) {
            if c == self.classes.len() {
                self.classes.push(vec![v]);
                if self.classes[c].len() == cap && self.big > 0 && cap > self.floor {
                    self.full += 1;
                }
                let r = self.run(i + 1, choose, f);
                if self.classes[c].len() == cap && self.big > 0 && cap > self.floor {
                    self.full -= 1;
                }
                self.classes.pop();
                r?;
                continue;
            }
            let len = self.classes[c].len();
            if len >= cap || self.classes[c].iter().any(|&u| self.g.has_edge(u, v)) {
                continue;
            }
            let grows_big = self.big > 0 && len + 1 == cap;
            if grows_big && self.full >= self.big {
                continue;
            }
            self.classes[c].push(v);
            if grows_big {
                self.full += 1;
            }
            let r = self.run(i + 1, choose, f);
            if grows_big {
                self.full -= 1;
            }
            self.classes[c].pop();
            r?;
        }
        ControlFlow::Continue(())
    }
}

fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

fn normalize(n: usize, classes: &[Vec<usize>]) -> EqColoring {
    let mut cl: Vec<Vec<usize>> = classes.to_vec();
    for c in &mut cl {
        c.sort_unstable();
    }
    cl.sort();
    EqColoring::new(n, cl).expect("search yields partitions")
}

/// Visits every unordered `k`-eqcol of `g` once, classes sorted by their
/// smallest vertex.
pub fn for_each_partition(g: &Graph, k: usize, mut f: impl FnMut(&EqColoring) -> ControlFlow<()>) {
    if k == 0 || k > g.n() {
        return;
    }
    let n = g.n();
    let mut search = PartitionSearch::new(g, k, degree_order(g));
    let mut choose = |slots: usize| (0..slots).collect::<Vec<_>>();
    let _ = search.run(0, &mut choose, &mut |classes: &[Vec<usize>]| f(&normalize(n, classes)));
}

/// All unordered `k`-eqcols of `g`.
pub fn partitions(g: &Graph, k: usize) -> Vec<EqColoring> {
    let mut out = Vec::new();
    for_each_partition(g, k, |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    });
    out
}

/// A `k`-eqcol of `g` if one exists (exact).
pub fn exists_eqcol(g: &Graph, k: usize) -> Option<EqColoring> {
    let mut found = None;
    for_each_partition(g, k, |c| {
        found = Some(c.clone());
        ControlFlow::Break(())
    });
    found
}

/// A random `k`-eqcol found by randomized backtracking, or `None` if none
/// was found within `node_budget` placements.
pub fn random_eqcol<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R, node_budget: usize) -> Option<EqColoring> {
    if k == 0 || k > g.n() {
        return None;
    }
    let n = g.n();
    let mut order: Vec<usize> = g.vertices().collect();
    order.shuffle(rng);
    let mut search = PartitionSearch::new(g, k, order);
    let mut budget = node_budget;
    let mut choose = |slots: usize| {
        if budget == 0 {
            return Vec::new();
        }
        budget -= 1;
        let mut s: Vec<usize> = (0..slots).collect();
        s.shuffle(rng);
        s
    };
    let mut found = None;
    let _ = search.run(0, &mut choose, &mut |classes: &[Vec<usize>]| {
        found = Some(normalize(n, classes));
        ControlFlow::Break(())
    });
    found
}

/// Exact equitable chromatic number and skip set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub chi_eq: usize,
    pub skip_set: Vec<usize>,
    pub witnesses: Vec<Option<EqColoring>>,
}

impl OracleResult {
    pub fn monotone(&self) -> bool {
        self.skip_set.is_empty()
    }

    /// Whether `g` admits a `k`-eqcol.
    pub fn admits(&self, k: usize) -> bool {
        k >= 1 && k < self.witnesses.len() && self.witnesses[k].is_some()
    }
}

pub fn oracle(g: &Graph) -> OracleResult {
    let n = g.n();
    let mut witnesses = vec![None; n + 1];
    for (k, slot) in witnesses.iter_mut().enumerate().skip(1) {
        *slot = exists_eqcol(g, k);
    }
    let chi_eq = (1..=n).find(|&k| witnesses[k].is_some()).unwrap_or(0);
    let skip_set = (chi_eq.max(1)..=n).filter(|&k| witnesses[k].is_none()).collect();
    OracleResult { chi_eq, skip_set, witnesses }
}

/// Largest graph for which labeled enumeration is allowed.
pub const ENUMERATION_LIMIT: usize = 8;

/// Calls `f` with every permutation of `0..k`.
pub fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
    fn go(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        if i == p.len() {
            return f(p);
        }
        for t in i..p.len() {
            p.swap(i, t);
            go(p, i + 1, f)?;
            p.swap(i, t);
        }
        ControlFlow::Continue(())
    }
    let mut p: Vec<usize> = (0..k).collect();
    go(&mut p, 0, &mut f)
}

/// Visits every labeled equitable coloring of `g` (every 0/1 point of the
/// polytope) exactly once.
pub fn for_each_labeled(g: &Graph, mut f: impl FnMut(&EqColoring) -> ControlFlow<()>) -> Result<()> {
    if g.n() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("labeled enumeration needs n ≤ {ENUMERATION_LIMIT}, got {}", g.n())));
    }
    let n = g.n();
    let mut stop = false;
    for k in 1..=n {
        for_each_partition(g, k, |part| {
            let r = for_each_permutation(k, |perm| {
                let classes = (0..k).map(|j| part.classes()[perm[j]].clone()).collect();
                f(&EqColoring { n, classes })
            });
            if r.is_break() {
                stop = true;
            }
            r
        });
        if stop {
            break;
        }
    }
    Ok(())
}

pub fn enumerate_binary_points(g: &Graph) -> Result<Vec<BinaryPoint>> {
    let mut out = Vec::new();
    for_each_labeled(g, |c| {
        out.push(c.to_binary());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
