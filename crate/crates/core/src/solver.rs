//! Cutting-plane loop at the root and cut-and-branch.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds::{initialize, invert, InitBounds};
use crate::coloring::EqColoring;
use crate::cuts::CutRow;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::{EngineChoice, LPOutcome, Relaxation};
use crate::model::{FracPoint, ModelSpec};
use crate::separation::{run_strategy, SeparationContext, Strategy};

/// Slack used when rounding LP bounds up.
pub const BOUND_EPS: f64 = 1e-6;
const INTEGRAL_TOL: f64 = 1e-6;
/// Largest complement on which maximum matchings are found by brute force.
pub const PRESOLVE_MATCHING_LIMIT: usize = 24;

pub fn round_bound(lb: f64) -> i64 {
    (lb - BOUND_EPS).ceil() as i64
}

#[derive(Clone, Debug, Serialize)]
pub struct CutLoopReport {
    /// `LB_0..=LB_rounds`: running maximum of the LP values, padded with the
    /// last value when the loop stops early.
    pub lb_trajectory: Vec<f64>,
    /// Raw LP optimum after each re-solve (not padded).
    pub lp_values: Vec<f64>,
    /// Cumulative number of cuts added after each round (padded).
    pub cuts_trajectory: Vec<usize>,
    /// Cumulative seconds after each round (padded).
    pub time_trajectory: Vec<f64>,
    pub rounds_run: usize,
    pub impr: i64,
    pub time_to_best: f64,
    pub cuts_to_best: usize,
    /// Every cut added, in the caller's vertex labels.
    #[serde(skip)]
    pub cuts: Vec<CutRow>,
    /// Log lines, one per cut.
    #[serde(skip)]
    pub log: Vec<String>,
}

impl CutLoopReport {
    fn finish(&mut self, rounds: usize) {
        let last = |v: &Vec<f64>| *v.last().unwrap();
        while self.lb_trajectory.len() < rounds + 1 {
            let (lb, t) = (last(&self.lb_trajectory), last(&self.time_trajectory));
            let c = *self.cuts_trajectory.last().unwrap();
            self.lb_trajectory.push(lb);
            self.time_trajectory.push(t);
            self.cuts_trajectory.push(c);
        }
        let first = round_bound(self.lb_trajectory[0]);
        let best = round_bound(*self.lb_trajectory.last().unwrap());
        self.impr = best - first;
        let at = self.lb_trajectory.iter().position(|&lb| round_bound(lb) == best).unwrap();
        self.time_to_best = self.time_trajectory[at];
        self.cuts_to_best = self.cuts_trajectory[at];
    }

    pub fn is_monotone(&self) -> bool {
        self.lb_trajectory.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn final_bound(&self) -> f64 {
        *self.lb_trajectory.last().unwrap()
    }
}

fn lp_point(outcome: LPOutcome) -> Result<FracPoint> {
    match outcome.point {
        Some(p) => Ok(p),
        None => Err(Error::Infeasible(format!("relaxation is {}", outcome.status))),
    }
}

/// Runs up to `rounds` iterations of separate-then-resolve on `relax`, which
/// must be built from a model over `g` (in the model's labels). `perm` maps
/// model labels back to the caller's labels for the recorded cuts.
pub fn cutting_plane(
    g: &Graph,
    bounds: &InitBounds,
    relax: &mut Relaxation,
    strategy: &Strategy,
    rounds: usize,
    perm: Option<&[usize]>,
) -> Result<CutLoopReport> {
    let start = Instant::now();
    let mut ctx = SeparationContext::new(g, *relax.layout(), bounds);
    let mut point = lp_point(relax.solve()?)?;
    let mut report = CutLoopReport {
        lb_trajectory: vec![point.objective],
        lp_values: vec![point.objective],
        cuts_trajectory: vec![0],
        time_trajectory: vec![start.elapsed().as_secs_f64()],
        rounds_run: 0,
        impr: 0,
        time_to_best: 0.0,
        cuts_to_best: 0,
        cuts: Vec::new(),
        log: Vec::new(),
    };
    let mut total = 0;
    for round in 1..=rounds {
        let found = run_strategy(strategy, &mut ctx, &point);
        if found.is_empty() {
            break;
        }
        let rows: Vec<_> = found.iter().map(|c| c.projected.to_lp_row()).collect();
        total += rows.len();
        for cut in &found {
            report.log.push(format!("round {round} {}", cut.log_line()));
            report.cuts.push(match perm {
                Some(perm) => cut.row.relabel(perm),
                None => cut.row.clone(),
            });
        }
        let outcome = relax.resolve_with_rows(&rows)?;
        if !outcome.is_optimal() {
            if outcome.status == eqcol_simplex::Status::Infeasible {
                return Err(Error::Infeasible("relaxation became infeasible after adding cuts".into()));
            }
            break;
        }
        point = lp_point(outcome)?;
        let lb = point.objective.max(*report.lb_trajectory.last().unwrap());
        report.lp_values.push(point.objective);
        report.lb_trajectory.push(lb);
        report.cuts_trajectory.push(total);
        report.time_trajectory.push(start.elapsed().as_secs_f64());
        report.rounds_run = round;
        if point.is_integral(INTEGRAL_TOL) {
            break;
        }
    }
    report.finish(rounds);
    Ok(report)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub time: Option<Duration>,
    pub nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub chi_eq: Option<usize>,
    /// Best known number of colors and a coloring achieving it, in the input
    /// labels.
    pub best: usize,
    #[serde(skip)]
    pub incumbent: EqColoring,
    pub lower_bound: usize,
    pub initial_lb: usize,
    pub initial_ub: usize,
    pub nodes: usize,
    pub total_seconds: f64,
    pub presolved: bool,
    pub root: Option<CutLoopReport>,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub strategy: Strategy,
    pub rounds: usize,
    pub limits: Limits,
    pub engine: EngineChoice,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            strategy: Strategy::standard(4).unwrap(),
            rounds: 30,
            limits: Limits::default(),
            engine: EngineChoice::Embedded,
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    relax: &'a mut Relaxation,
    best: usize,
    incumbent: EqColoring,
    lb: usize,
    nodes: usize,
    limits: &'a Limits,
    start: Instant,
    stopped: bool,
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        self.limits.time.is_some_and(|t| self.start.elapsed() >= t) || self.limits.nodes.is_some_and(|m| self.nodes >= m)
    }

    /// Caps `w_j = 0` for `j ≥ best`, so only strictly better colorings stay
    /// feasible.
    fn apply_cap(&mut self) {
        let layout = *self.relax.layout();
        for j in self.best.max(1)..=layout.ub {
            let c = layout.w_col(j).unwrap();
            let (lo, _) = self.relax.bounds(c);
            self.relax.set_bounds(c, lo, 0.0);
        }
    }

    fn capped_upper(&self, col: usize, upper: f64) -> f64 {
        let layout = self.relax.layout();
        let first_w = layout.w_col(1).unwrap();
        if col >= first_w && col - first_w + 1 >= self.best {
            0.0
        } else {
            upper
        }
    }

    fn choose(&self, p: &FracPoint) -> Option<usize> {
        let layout = *self.relax.layout();
        let frac = |a: f64| (a - a.round()).abs() > INTEGRAL_TOL;
        let pick = |vals: &[f64], offset: usize| {
            vals.iter()
                .enumerate()
                .filter(|(_, &a)| frac(a))
                .min_by(|(i, a), (k, b)| (**a - 0.5).abs().total_cmp(&(**b - 0.5).abs()).then(i.cmp(k)))
                .map(|(i, _)| offset + i)
        };
        pick(&p.x, 0).or_else(|| pick(&p.w, layout.w_col(1).unwrap()))
    }

    fn node(&mut self) -> Result<()> {
        if self.best <= self.lb {
            return Ok(());
        }
        if self.out_of_budget() {
            self.stopped = true;
            return Ok(());
        }
        self.nodes += 1;
        let outcome = self.relax.solve()?;
        let Some(p) = outcome.point else {
            if outcome.status != eqcol_simplex::Status::Infeasible {
                return Err(Error::Infeasible(format!("node relaxation ended with status {}", outcome.status)));
            }
            return Ok(());
        };
        if round_bound(p.objective) >= self.best as i64 {
            return Ok(());
        }
        match self.choose(&p) {
            None => {
                let c =
                    p.decode(INTEGRAL_TOL).ok_or_else(|| Error::InvalidColoring("integral LP point does not decode".into()))?;
                if !c.is_equitable(self.g)? {
                    return Err(Error::InvalidColoring("integral LP point is not an equitable coloring".into()));
                }
                if c.k() < self.best {
                    self.best = c.k();
                    self.incumbent = c;
                    self.apply_cap();
                }
                Ok(())
            }
            Some(col) => {
                let (lo, hi) = self.relax.bounds(col);
                self.relax.set_bounds(col, lo, 0.0_f64.max(lo));
                let r = self.node();
                self.relax.set_bounds(col, lo, self.capped_upper(col, hi));
                r?;
                if self.stopped || self.best <= self.lb {
                    return Ok(());
                }
                let (lo, hi) = self.relax.bounds(col);
                if hi >= 1.0 {
                    self.relax.set_bounds(col, 1.0, hi);
                    let r = self.node();
                    let hi = self.relax.bounds(col).1;
                    self.relax.set_bounds(col, lo, self.capped_upper(col, hi));
                    r?;
                }
                Ok(())
            }
        }
    }
}

/// Depth-first branch and bound on `relax`, starting from `incumbent`.
/// Returns the best coloring (model labels), its size, nodes and whether the
/// search finished.
pub fn branch_and_bound(
    g: &Graph,
    relax: &mut Relaxation,
    lb: usize,
    incumbent: EqColoring,
    limits: &Limits,
) -> Result<(EqColoring, usize, bool)> {
    let best = incumbent.k();
    let mut search = Search { g, relax, best, incumbent, lb, nodes: 0, limits, start: Instant::now(), stopped: false };
    search.apply_cap();
    search.node()?;
    Ok((search.incumbent, search.nodes, !search.stopped))
}

/// A maximum matching of `g` by memoized search over vertex subsets
/// (`n ≤ 32`).
fn maximum_matching(g: &Graph) -> Vec<(usize, usize)> {
    fn size(g: &Graph, mask: u32, memo: &mut HashMap<u32, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&m) = memo.get(&mask) {
            return m;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = size(g, rest, memo);
        for &u in g.neighbors(v + 1) {
            let bit = 1u32 << (u - 1);
            if rest & bit != 0 {
                best = best.max(1 + size(g, rest & !bit, memo));
            }
        }
        memo.insert(mask, best);
        best
    }
    let mut memo = HashMap::new();
    let mut mask = if g.n() == 32 { u32::MAX } else { (1u32 << g.n()) - 1 };
    let mut pairs = Vec::new();
    while mask != 0 {
        let target = size(g, mask, &mut memo);
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        mask = rest;
        if size(g, rest, &mut memo) == target {
            continue;
        }
        let u = g
            .neighbors(v + 1)
            .iter()
            .copied()
            .find(|&u| rest & (1 << (u - 1)) != 0 && 1 + size(g, rest & !(1 << (u - 1)), &mut memo) == target)
            .expect("memo is consistent");
        pairs.push((v + 1, u));
        mask &= !(1 << (u - 1));
    }
    pairs
}

/// Polynomial cases: edgeless graphs, and graphs with a universal vertex,
/// where every class has at most two vertices and `χ_eq = n − ν(Ḡ)`.
pub fn presolve(g: &Graph) -> Option<(usize, EqColoring)> {
    let n = g.n();
    if n == 0 {
        return Some((0, EqColoring::singletons(0)));
    }
    if g.num_edges() == 0 {
        return Some((1, EqColoring::new(n, vec![g.vertices().collect()]).unwrap()));
    }
    if n > PRESOLVE_MATCHING_LIMIT || !g.vertices().any(|v| g.is_universal(v)) {
        return None;
    }
    let pairs = maximum_matching(&g.complement());
    let mut used = vec![false; n + 1];
    for &(a, b) in &pairs {
        used[a] = true;
        used[b] = true;
    }
    let mut classes: Vec<Vec<usize>> = pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
    classes.extend(g.vertices().filter(|&v| !used[v]).map(|v| vec![v]));
    let c = EqColoring::new(n, classes).unwrap();
    Some((c.k(), c))
}

/// Initialization, root cutting planes and branch and bound.
pub fn cut_and_branch(g: &Graph, config: &SolveConfig) -> Result<SolveReport> {
    let start = Instant::now();
    if let Some((k, c)) = presolve(g) {
        return Ok(SolveReport {
            status: SolveStatus::Optimal,
            chi_eq: Some(k),
            best: k,
            incumbent: c,
            lower_bound: k,
            initial_lb: k,
            initial_ub: k,
            nodes: 0,
            total_seconds: start.elapsed().as_secs_f64(),
            presolved: true,
            root: None,
        });
    }
    let (h, bounds) = initialize(g)?;
    let back = invert(&bounds.labeling);
    let model = ModelSpec::build(&h, &bounds)?;
    let mut relax = Relaxation::new(&model, &config.engine)?;
    let root = cutting_plane(&h, &bounds, &mut relax, &config.strategy, config.rounds, Some(&back))?;
    let lb = (round_bound(root.final_bound()).max(0) as usize).max(bounds.lb);
    let (best_c, nodes, finished) = branch_and_bound(&h, &mut relax, lb, bounds.ub_witness.clone(), &config.limits)?;
    let best = best_c.k();
    let (status, chi_eq, lower) =
        if finished { (SolveStatus::Optimal, Some(best), best) } else { (SolveStatus::TimeLimit, None, lb) };
    Ok(SolveReport {
        status,
        chi_eq,
        best,
        incumbent: best_c.relabel_vertices(&back),
        lower_bound: lower,
        initial_lb: bounds.lb,
        initial_ub: bounds.ub,
        nodes,
        total_seconds: start.elapsed().as_secs_f64(),
        presolved: false,
        root: Some(root),
    })
}

/// Builds the model for `g` and runs only the root cutting-plane loop.
pub fn root_cut_loop(
    g: &Graph,
    strategy: &Strategy,
    rounds: usize,
    engine: &EngineChoice,
) -> Result<(InitBounds, CutLoopReport)> {
    let (h, bounds) = initialize(g)?;
    let back = invert(&bounds.labeling);
    let model = ModelSpec::build(&h, &bounds)?;
    let mut relax = Relaxation::new(&model, engine)?;
    let report = cutting_plane(&h, &bounds, &mut relax, strategy, rounds, Some(&back))?;
    Ok((bounds, report))
}
