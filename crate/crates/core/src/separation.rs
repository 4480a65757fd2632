//! Heuristic separation of the inequality families and the nested strategies
//! combining them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::bounds::InitBounds;
use crate::cuts::{
    block_cut, clique_cut, clique_neighborhood_cut, outside_neighborhood_cut, rank_cut, s_color_cut, subneighborhood_cut,
    two_rank_cut, CutRow, ProjectedRow,
};
use crate::graph::{extend_clique, Graph};
use crate::model::{FracPoint, Layout};

/// Minimum violation for a row to be reported.
pub const VIOLATION_TOL: f64 = 1e-5;
pub const FAMILY_CAP: usize = 50;
pub const ROUND_CAP: usize = 200;
/// Clique seeds tried per color.
const CLIQUE_SEEDS: usize = 5;
const FRAC_EPS: f64 = 1e-6;

/// A separation routine. The declaration order is the order in which their
/// cuts are merged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Routine {
    Clique,
    TwoRank,
    Block,
    SColor,
    Subneighborhood,
    OutsideNeighborhood,
    CliqueNeighborhood,
}

impl Routine {
    pub const ALL: [Routine; 7] = [
        Routine::Clique,
        Routine::TwoRank,
        Routine::Block,
        Routine::SColor,
        Routine::Subneighborhood,
        Routine::OutsideNeighborhood,
        Routine::CliqueNeighborhood,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Routine::Clique => "clique",
            Routine::TwoRank => "2rank",
            Routine::Block => "block",
            Routine::SColor => "scolor",
            Routine::Subneighborhood => "subnbhd",
            Routine::OutsideNeighborhood => "outnbhd",
            Routine::CliqueNeighborhood => "cliquenbhd",
        }
    }
}

/// A set of enabled routines. `S1` … `S7` enable the first `i` routines of
/// [`Routine::ALL`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    name: String,
    routines: Vec<Routine>,
}

impl Strategy {
    pub fn standard(i: usize) -> Option<Strategy> {
        (1..=7).contains(&i).then(|| Strategy { name: format!("S{i}"), routines: Routine::ALL[..i].to_vec() })
    }

    /// No separation at all: the cut loop only re-solves the initial relaxation.
    pub fn none() -> Strategy {
        Strategy { name: "none".into(), routines: Vec::new() }
    }

    pub fn custom(name: impl Into<String>, routines: &[Routine]) -> Strategy {
        let mut routines = routines.to_vec();
        routines.sort();
        routines.dedup();
        Strategy { name: name.into(), routines }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn routines(&self) -> &[Routine] {
        &self.routines
    }

    pub fn enables(&self, r: Routine) -> bool {
        self.routines.contains(&r)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("none") {
            return Ok(Strategy::none());
        }
        s.strip_prefix(['S', 's'])
            .and_then(|d| d.parse().ok())
            .and_then(Strategy::standard)
            .ok_or_else(|| format!("unknown strategy {s:?} (expected S1..S7 or none)"))
    }
}

/// Graph data and bounds shared by the routines, plus the pool of maximal
/// cliques met so far.
#[derive(Clone, Debug)]
pub struct SeparationContext<'a> {
    pub g: &'a Graph,
    pub layout: Layout,
    pub alpha_lo: Vec<usize>,
    pub alpha_hi: Vec<usize>,
    pub clique_pool: BTreeSet<Vec<usize>>,
    pub tol: f64,
    pub family_cap: usize,
    pub round_cap: usize,
}

impl<'a> SeparationContext<'a> {
    pub fn new(g: &'a Graph, layout: Layout, bounds: &InitBounds) -> Self {
        SeparationContext {
            g,
            layout,
            alpha_lo: bounds.alpha_lo.clone(),
            alpha_hi: bounds.alpha_hi.clone(),
            clique_pool: BTreeSet::new(),
            tol: VIOLATION_TOL,
            family_cap: FAMILY_CAP,
            round_cap: ROUND_CAP,
        }
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn ub(&self) -> usize {
        self.layout.ub
    }

    fn lb(&self) -> usize {
        self.layout.lb.max(1)
    }

    fn alpha_lo(&self, u: usize) -> usize {
        self.alpha_lo[u - 1]
    }

    fn alpha_hi(&self, u: usize) -> usize {
        self.alpha_hi[u - 1]
    }
}

/// A violated row found by separation.
#[derive(Clone, Debug)]
pub struct SeparatedCut {
    pub routine: Routine,
    pub row: CutRow,
    pub projected: ProjectedRow,
    pub violation: f64,
}

impl SeparatedCut {
    /// One log line: routine, row parameters and violation.
    pub fn log_line(&self) -> String {
        format!("{} {} violation={:.6}", self.routine.name(), self.row.params, self.violation)
    }
}

fn keep(ctx: &SeparationContext, p: &FracPoint, row: CutRow, out: &mut Vec<CutRow>) {
    if row.violation(p) > ctx.tol {
        out.push(row);
    }
}

/// For each color, grows cliques from the heaviest edges, each greedily by
/// `x*_vj` and then to maximality; every clique met joins the pool.
pub fn separate_cliques(ctx: &mut SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let g = ctx.g;
    let mut out = Vec::new();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for j in 1..=ctx.ub() {
        edges.sort_by(|a, b| {
            let wa = p.x(a.0, j) + p.x(a.1, j);
            let wb = p.x(b.0, j) + p.x(b.1, j);
            wb.total_cmp(&wa).then(a.cmp(b))
        });
        let mut covered = vec![false; g.n() + 1];
        let mut seeds = 0;
        for &(a, b) in &edges {
            if seeds == CLIQUE_SEEDS || p.x(a, j) + p.x(b, j) <= FRAC_EPS {
                break;
            }
            if covered[a] && covered[b] {
                continue;
            }
            seeds += 1;
            let q = extend_clique(g, &[a, b], |v| p.x(v, j));
            for &v in &q {
                covered[v] = true;
            }
            if let Ok(row) = clique_cut(g, &q, j) {
                keep(ctx, p, row, &mut out);
            }
            ctx.clique_pool.insert(q);
        }
    }
    out
}

/// `(v,j)`-block rows for `2 ≤ j ≤ ub`.
pub fn separate_blocks(ctx: &SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let mut out = Vec::new();
    for v in ctx.g.vertices() {
        for j in 2..=ctx.ub() {
            let lhs: f64 = (j..=ctx.ub()).map(|k| p.x(v, k)).sum();
            if lhs - p.w(j) > ctx.tol {
                out.push(block_cut(v, j, ctx.n()).expect("block parameters in range"));
            }
        }
    }
    out
}

/// Greedy `(S,Q,j)`-2-rank separation with forbidden marks. Sets with no
/// vertex adjacent to all of `S` give the stronger `α = 2` rank row.
pub fn separate_two_rank(ctx: &SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let g = ctx.g;
    let n = ctx.n();
    let mut out = Vec::new();
    for j in 1..=ctx.ub().min(n.saturating_sub(1)) {
        let mut forbidden = vec![false; n + 1];
        loop {
            let free: Vec<usize> = g.vertices().filter(|&v| !forbidden[v]).collect();
            if free.len() <= 5 {
                break;
            }
            let mut seed: Option<(usize, usize, f64)> = None;
            for (i, &a) in free.iter().enumerate() {
                for &b in &free[i + 1..] {
                    let s = p.x(a, j) + p.x(b, j);
                    if g.has_edge(a, b) || s >= 1.0 - FRAC_EPS {
                        continue;
                    }
                    if seed.is_none_or(|(.., best)| s > best + 1e-12) {
                        seed = Some((a, b, s));
                    }
                }
            }
            let Some((a, b, _)) = seed else { break };
            let mut s = vec![a, b];
            let mut q: Vec<usize> = Vec::new();
            loop {
                // α(S ∪ {v}) = 2 iff the non-neighbors of v in S form a clique.
                let next = free
                    .iter()
                    .copied()
                    .filter(|v| !s.contains(v) && q.iter().all(|&t| g.has_edge(t, *v)))
                    .filter(|&v| {
                        let non: Vec<usize> = s.iter().copied().filter(|&t| !g.has_edge(t, v)).collect();
                        g.is_clique(&non)
                    })
                    .fold(None::<(usize, f64)>, |best, v| match best {
                        Some((_, bx)) if p.x(v, j) <= bx + 1e-12 => best,
                        _ => Some((v, p.x(v, j))),
                    });
                let Some((v, _)) = next else { break };
                if s.iter().all(|&t| g.has_edge(t, v)) {
                    q.push(v);
                }
                s.push(v);
            }
            s.sort_unstable();
            let q: Vec<usize> = s.iter().copied().filter(|&v| s.iter().all(|&t| t == v || g.has_edge(t, v))).collect();
            let row = if !q.is_empty() { two_rank_cut(&s, &q, j, n).ok() } else { rank_cut(&s, j, 2, n).ok() };
            if let Some(row) = row {
                keep(ctx, p, row, &mut out);
            }
            for &v in &s {
                forbidden[v] = true;
            }
        }
    }
    out
}

/// `S`-color separation over the most fractional color classes.
pub fn separate_s_color(ctx: &SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let n = ctx.n();
    let Some(t) = (1..=ctx.ub()).rev().find(|&j| p.w(j) > FRAC_EPS) else { return Vec::new() };
    if p.w(t) >= 1.0 - FRAC_EPS || p.w(t + 1) > FRAC_EPS {
        return Vec::new();
    }
    let Some(min_rem) = (1..=t).filter(|&k| !n.is_multiple_of(k)).map(|k| n % k).min() else { return Vec::new() };
    let fractional = |j: usize| {
        ctx.g
            .vertices()
            .filter(|&v| {
                let x = p.x(v, j);
                x > FRAC_EPS && x < 1.0 - FRAC_EPS
            })
            .count()
    };
    let mut order: Vec<usize> = (1..=t).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(fractional(j)), j));
    let mut out = Vec::new();
    let mut forbidden = vec![false; t + 1];
    loop {
        let free: Vec<usize> = order.iter().copied().filter(|&j| !forbidden[j]).collect();
        if free.len() <= 2 {
            break;
        }
        let mut best: Option<(CutRow, f64)> = None;
        for s in (2..=t.saturating_sub(2)).filter(|&s| s > min_rem && s <= free.len()) {
            let row = s_color_cut(&free[..s], n).expect("colors in range");
            let v = row.violation(p);
            if best.as_ref().is_none_or(|(_, b)| v > *b + 1e-12) {
                best = Some((row, v));
            }
        }
        let Some((row, v)) = best else { break };
        if v > ctx.tol {
            out.push(row);
        }
        forbidden[free[0]] = true;
    }
    out
}

/// Vertices whose neighborhood surely has `α ≥ 3`.
fn wide_vertices<'c>(ctx: &'c SeparationContext<'_>) -> impl Iterator<Item = usize> + 'c {
    ctx.g.vertices().filter(|&u| ctx.alpha_lo(u) >= 3)
}

/// Weakened `(u,j,N(u))`-subneighborhood rows.
pub fn separate_subneighborhood(ctx: &SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let n = ctx.n();
    let mut out = Vec::new();
    for j in 1..=ctx.ub().min(n.saturating_sub(1)) {
        for u in wide_vertices(ctx) {
            if let Ok(row) = subneighborhood_cut(ctx.g, u, j, ctx.g.neighbors(u), ctx.alpha_hi(u), ctx.lb()) {
                keep(ctx, p, row, &mut out);
            }
        }
    }
    out
}

/// Weakened `(u,j)`-outside-neighborhood rows, filtered by the necessary
/// facet condition `α(N(u)) ≥ ⌊n / max{j, χ}⌋`.
pub fn separate_outside_neighborhood(ctx: &SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let n = ctx.n();
    let mut out = Vec::new();
    for j in 1..=ctx.ub().min(n / 2) {
        for u in wide_vertices(ctx) {
            if ctx.alpha_lo(u) < n / j.max(ctx.lb()) {
                continue;
            }
            if let Ok(row) = outside_neighborhood_cut(ctx.g, u, j, ctx.lb()) {
                keep(ctx, p, row, &mut out);
            }
        }
    }
    out
}

/// Weakened `(u,j,k,Q)`-clique-neighborhood rows over the clique pool.
pub fn separate_clique_neighborhood(ctx: &SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    let g = ctx.g;
    let n = ctx.n();
    let (lb, ub) = (ctx.lb(), ctx.ub());
    let mut out = Vec::new();
    for q in &ctx.clique_pool {
        let mut blocked = vec![false; n + 1];
        for &t in q {
            blocked[t] = true;
            for &v in g.neighbors(t) {
                blocked[v] = true;
            }
        }
        for u in g.vertices().filter(|&u| !blocked[u]) {
            for j in 1..=ub {
                let lo = 3.max(n.div_ceil(ub));
                let hi = n.div_ceil(j).min(n.div_ceil(lb)).min(ctx.alpha_hi(u) + 1);
                for k in lo..=hi {
                    if j + 1 > n.div_ceil(k - 1) {
                        continue;
                    }
                    if let Ok(row) = clique_neighborhood_cut(g, u, j, k, q, ctx.alpha_hi(u)) {
                        keep(ctx, p, row, &mut out);
                    }
                }
            }
        }
    }
    out
}

pub fn run_routine(routine: Routine, ctx: &mut SeparationContext, p: &FracPoint) -> Vec<CutRow> {
    match routine {
        Routine::Clique => separate_cliques(ctx, p),
        Routine::TwoRank => separate_two_rank(ctx, p),
        Routine::Block => separate_blocks(ctx, p),
        Routine::SColor => separate_s_color(ctx, p),
        Routine::Subneighborhood => separate_subneighborhood(ctx, p),
        Routine::OutsideNeighborhood => separate_outside_neighborhood(ctx, p),
        Routine::CliqueNeighborhood => separate_clique_neighborhood(ctx, p),
    }
}

/// One separation round: every enabled routine in merge order, rows
/// deduplicated by their projection onto the model, each routine capped at
/// `family_cap` most violated rows and the round at `round_cap`.
pub fn run_strategy(strategy: &Strategy, ctx: &mut SeparationContext, p: &FracPoint) -> Vec<SeparatedCut> {
    let values = p.values();
    let mut seen: HashSet<ProjectedRow> = HashSet::new();
    let mut out = Vec::new();
    for &routine in strategy.routines() {
        let mut found: Vec<SeparatedCut> = run_routine(routine, ctx, p)
            .into_iter()
            .filter_map(|row| {
                let projected = row.project(&ctx.layout);
                let violation = projected.violation(&values);
                (!projected.is_trivial() && violation > ctx.tol).then_some(SeparatedCut { routine, row, projected, violation })
            })
            .collect();
        found.sort_by(|a, b| b.violation.total_cmp(&a.violation).then_with(|| a.projected.cmp(&b.projected)));
        let mut taken = 0;
        for cut in found {
            if taken == ctx.family_cap || out.len() == ctx.round_cap {
                break;
            }
            if seen.insert(cut.projected.clone()) {
                out.push(cut);
                taken += 1;
            }
        }
    }
    out
}
