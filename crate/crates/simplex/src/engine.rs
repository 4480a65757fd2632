//! Bounded-variable simplex on a condensed dense tableau.
//!
//! Every active row `r` owns a logical variable `s_r = a_r·x` whose bounds
//! encode the row sense, so the tableau is homogeneous: each basic variable
//! is a linear combination of the nonbasic ones, `x_B = T·x_N`, and `T` has
//! exactly one column per structural column no matter how many rows are
//! active. The objective row `z = d·x_N` is updated alongside.
//!
//! The main phase is the dual simplex: the starting all-logical basis is dual
//! feasible once nonbasic columns sit at the bound matching the sign of their
//! cost, and adding rows or tightening bounds keeps it so. A primal pass
//! cleans up any dual infeasibility left behind by round-off.

use crate::problem::{LpError, LpSolver, Problem, Row, Solution, Status};

const INF: f64 = f64::INFINITY;

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub primal_tol: f64,
    pub dual_tol: f64,
    pub pivot_tol: f64,
    /// Per-solve pivot budget; `None` derives one from the problem size.
    pub max_iterations: Option<usize>,
    /// Rebuild the tableau from the original rows after this many pivots.
    pub reinvert_every: usize,
    /// Pooled rows are dropped from the tableau again once more than this
    /// many are active and slack. `None` uses twice the column count.
    pub purge_threshold: Option<usize>,
    /// Temporary box used for columns that must sit at an infinite bound.
    pub artificial_bound: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            primal_tol: 1e-9,
            dual_tol: 1e-9,
            pivot_tol: 1e-9,
            max_iterations: None,
            reinvert_every: 400,
            purge_threshold: None,
            artificial_bound: 1e7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    Basic(usize),
    NonBasic(usize),
    Inactive,
}

enum Phase {
    Done,
    Infeasible,
    Unbounded,
    Limit,
}

/// The embedded engine. Variables `0..n` are structural columns, `n + r` is
/// the logical of row `r`.
#[derive(Clone, Debug)]
pub struct DualSimplex {
    opts: EngineOptions,
    n: usize,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    artificial: Vec<bool>,
    rows: Vec<Row>,
    pos: Vec<Pos>,
    value: Vec<f64>,
    at_upper: Vec<bool>,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
    tab: Vec<f64>,
    d: Vec<f64>,
    since_reinvert: usize,
}

impl DualSimplex {
    pub fn new(problem: &Problem, opts: EngineOptions) -> Result<Self, LpError> {
        problem.validate()?;
        let n = problem.num_cols();
        let mut engine = DualSimplex {
            opts,
            n,
            cost: problem.cost.clone(),
            lower: problem.lower.clone(),
            upper: problem.upper.clone(),
            artificial: vec![false; n],
            rows: Vec::new(),
            pos: (0..n).map(Pos::NonBasic).collect(),
            value: vec![0.0; n],
            at_upper: vec![false; n],
            basis: Vec::new(),
            nonbasic: (0..n).collect(),
            tab: Vec::new(),
            d: problem.cost.clone(),
            since_reinvert: 0,
        };
        for c in 0..n {
            let (lo, hi) = (engine.lower[c], engine.upper[c]);
            if lo > hi {
                return Err(LpError::Dimension(format!("column {c} has lower bound {lo} > upper bound {hi}")));
            }
            if lo.is_finite() {
                engine.value[c] = lo;
            } else if hi.is_finite() {
                engine.value[c] = hi;
                engine.at_upper[c] = true;
            }
        }
        engine.add_rows(&problem.rows)?;
        Ok(engine)
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    /// Number of rows currently in the tableau.
    pub fn active_rows(&self) -> usize {
        self.basis.len()
    }

    /// Current structural values (meaningful after a successful solve).
    pub fn values(&self) -> &[f64] {
        &self.value[..self.n]
    }

    fn is_fixed(&self, var: usize) -> bool {
        self.lower[var] == self.upper[var]
    }

    fn activity(&self, r: usize) -> f64 {
        self.rows[r].activity(&self.value[..self.n])
    }

    fn activate(&mut self, r: usize) {
        let n = self.n;
        let mut t = vec![0.0; n];
        for &(c, a) in &self.rows[r].coeffs {
            match self.pos[c] {
                Pos::NonBasic(j) => t[j] += a,
                Pos::Basic(i) => {
                    for (tj, bj) in t.iter_mut().zip(&self.tab[i * n..(i + 1) * n]) {
                        *tj += a * bj;
                    }
                }
                Pos::Inactive => unreachable!("structural columns are always active"),
            }
        }
        let var = n + r;
        let i = self.basis.len();
        self.basis.push(var);
        self.tab.extend_from_slice(&t);
        self.pos[var] = Pos::Basic(i);
        self.value[var] = self.activity(r);
    }

    fn deactivate(&mut self, r: usize) {
        let n = self.n;
        let var = n + r;
        let Pos::Basic(i) = self.pos[var] else {
            return;
        };
        let last = self.basis.len() - 1;
        if i != last {
            let moved = self.basis[last];
            self.tab.copy_within(last * n..(last + 1) * n, i * n);
            self.basis[i] = moved;
            self.pos[moved] = Pos::Basic(i);
        }
        self.basis.pop();
        self.tab.truncate(last * n);
        self.pos[var] = Pos::Inactive;
    }

    /// Moves nonbasic column `j` by `delta`, keeping `x_B = T·x_N`.
    fn shift_nonbasic(&mut self, j: usize, delta: f64) {
        if delta == 0.0 {
            return;
        }
        let n = self.n;
        let var = self.nonbasic[j];
        self.value[var] += delta;
        for (i, &b) in self.basis.iter().enumerate() {
            let a = self.tab[i * n + j];
            if a != 0.0 {
                self.value[b] += a * delta;
            }
        }
    }

    fn set_nonbasic_value(&mut self, j: usize, to_upper: bool) {
        let var = self.nonbasic[j];
        let target = if to_upper { self.upper[var] } else { self.lower[var] };
        let target = if target.is_finite() { target } else { 0.0 };
        let delta = target - self.value[var];
        self.shift_nonbasic(j, delta);
        self.value[var] = target;
        self.at_upper[var] = to_upper;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let n = self.n;
        let p = self.tab[r * n + c];
        let inv = 1.0 / p;
        let mut scaled: Vec<f64> = self.tab[r * n..(r + 1) * n].iter().map(|v| v * inv).collect();
        scaled[c] = 0.0;
        let nz: Vec<usize> = (0..n).filter(|&j| scaled[j] != 0.0).collect();
        {
            let row = &mut self.tab[r * n..(r + 1) * n];
            for &j in &nz {
                row[j] = -scaled[j];
            }
            row[c] = inv;
        }
        for (i, row) in self.tab.chunks_exact_mut(n).enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f == 0.0 {
                continue;
            }
            for &j in &nz {
                let v = row[j] - f * scaled[j];
                row[j] = if v.abs() < 1e-13 { 0.0 } else { v };
            }
            row[c] = f * inv;
        }
        let f = self.d[c];
        if f != 0.0 {
            for &j in &nz {
                self.d[j] -= f * scaled[j];
            }
        }
        self.d[c] = f * inv;

        let entering = self.nonbasic[c];
        let leaving = self.basis[r];
        self.basis[r] = entering;
        self.nonbasic[c] = leaving;
        self.pos[entering] = Pos::Basic(r);
        self.pos[leaving] = Pos::NonBasic(c);
        self.since_reinvert += 1;
    }

    fn recompute_basics(&mut self) {
        let n = self.n;
        for i in 0..self.basis.len() {
            let row = &self.tab[i * n..(i + 1) * n];
            let v: f64 = row.iter().zip(&self.nonbasic).map(|(a, &var)| a * self.value[var]).sum();
            self.value[self.basis[i]] = v;
        }
    }

    fn recompute_duals(&mut self) {
        let n = self.n;
        let mut d: Vec<f64> = self.nonbasic.iter().map(|&v| self.cost[v]).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = self.cost[b];
            if cb != 0.0 {
                for (dj, a) in d.iter_mut().zip(&self.tab[i * n..(i + 1) * n]) {
                    *dj += cb * a;
                }
            }
        }
        self.d = d;
    }

    /// Rebuilds the tableau from the original rows for the current basis.
    /// Returns false when the basis turned out numerically singular; the
    /// offending columns are then left nonbasic.
    fn reinvert(&mut self) -> bool {
        let n = self.n;
        let active: Vec<usize> = self.basis.iter().chain(&self.nonbasic).filter(|&&v| v >= n).map(|&v| v - n).collect();
        let basic_structurals: Vec<usize> = (0..n).filter(|&c| matches!(self.pos[c], Pos::Basic(_))).collect();
        let leave: Vec<bool> = {
            let mut m = vec![false; self.pos.len()];
            for &v in &self.nonbasic {
                if v >= n {
                    m[v] = true;
                }
            }
            m
        };

        self.basis.clear();
        self.tab.clear();
        self.nonbasic = (0..n).collect();
        for c in 0..n {
            self.pos[c] = Pos::NonBasic(c);
        }
        for &r in &active {
            let var = n + r;
            let i = self.basis.len();
            self.basis.push(var);
            self.pos[var] = Pos::Basic(i);
            let mut t = vec![0.0; n];
            for &(c, a) in &self.rows[r].coeffs {
                t[c] += a;
            }
            self.tab.extend_from_slice(&t);
        }

        let mut ok = true;
        for &s in &basic_structurals {
            let Pos::NonBasic(c) = self.pos[s] else { unreachable!() };
            let mut best: Option<(usize, f64)> = None;
            for (i, &b) in self.basis.iter().enumerate() {
                if b >= n && leave[b] {
                    let a = self.tab[i * n + c].abs();
                    if a > 1e-11 && best.is_none_or(|(_, x)| a > x) {
                        best = Some((i, a));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => {
                    ok = false;
                    let to_upper = self.upper[s].is_finite() && !self.lower[s].is_finite();
                    self.at_upper[s] = to_upper;
                    self.value[s] = if to_upper {
                        self.upper[s]
                    } else if self.lower[s].is_finite() {
                        self.lower[s]
                    } else {
                        0.0
                    };
                }
            }
        }
        // Logicals that should have left the basis but could not stay basic
        // within their bounds only if the basis was singular; values are
        // recomputed below either way.
        self.recompute_duals();
        self.recompute_basics();
        self.since_reinvert = 0;
        ok
    }

    fn residual(&self) -> f64 {
        let n = self.n;
        self.basis
            .iter()
            .chain(&self.nonbasic)
            .filter(|&&v| v >= n)
            .map(|&v| {
                let act = self.activity(v - n);
                (act - self.value[v]).abs() / (1.0 + act.abs())
            })
            .fold(0.0, f64::max)
    }

    fn make_dual_feasible(&mut self) {
        let tol = self.opts.dual_tol;
        let big = self.opts.artificial_bound;
        for j in 0..self.n {
            let var = self.nonbasic[j];
            if self.is_fixed(var) {
                continue;
            }
            let dj = self.d[j];
            if dj > tol && (self.at_upper[var] || !self.lower[var].is_finite()) {
                if !self.lower[var].is_finite() {
                    self.lower[var] = -big;
                    self.artificial[var] = true;
                }
                self.set_nonbasic_value(j, false);
            } else if dj < -tol && !self.at_upper[var] {
                if !self.upper[var].is_finite() {
                    self.upper[var] = big;
                    self.artificial[var] = true;
                }
                self.set_nonbasic_value(j, true);
            }
        }
    }

    fn dual_infeasible(&self) -> bool {
        let tol = self.opts.dual_tol * 10.0;
        (0..self.n).any(|j| {
            let var = self.nonbasic[j];
            if self.is_fixed(var) {
                return false;
            }
            let dj = self.d[j];
            (dj < -tol && !self.at_upper[var]) || (dj > tol && self.at_upper[var])
        })
    }

    fn dual_phase(&mut self, iters: &mut usize, limit: usize) -> Phase {
        let n = self.n;
        let ptol = self.opts.primal_tol;
        let pivot_tol = self.opts.pivot_tol;
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run > 3 * self.basis.len().max(1);
            let mut leave: Option<(usize, f64)> = None;
            for (i, &var) in self.basis.iter().enumerate() {
                let v = self.value[var];
                let infeas = if v < self.lower[var] - ptol {
                    self.lower[var] - v
                } else if v > self.upper[var] + ptol {
                    v - self.upper[var]
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((bi, b)) => {
                        if bland {
                            var < self.basis[bi]
                        } else {
                            infeas > b
                        }
                    }
                };
                if better {
                    leave = Some((i, infeas));
                }
            }
            let Some((r, _)) = leave else {
                return Phase::Done;
            };
            if *iters >= limit {
                return Phase::Limit;
            }
            *iters += 1;

            let leaving = self.basis[r];
            let increase = self.value[leaving] < self.lower[leaving];
            let target = if increase { self.lower[leaving] } else { self.upper[leaving] };

            let row = &self.tab[r * n..(r + 1) * n];
            let mut enter: Option<usize> = None;
            let mut best_ratio = INF;
            let mut best_alpha = 0.0f64;
            for (j, &alpha) in row.iter().enumerate() {
                if alpha.abs() <= pivot_tol {
                    continue;
                }
                let var = self.nonbasic[j];
                if self.is_fixed(var) {
                    continue;
                }
                let free = !self.lower[var].is_finite() && !self.upper[var].is_finite();
                let up = self.at_upper[var];
                let eligible = free
                    || if increase {
                        (!up && alpha > 0.0) || (up && alpha < 0.0)
                    } else {
                        (!up && alpha < 0.0) || (up && alpha > 0.0)
                    };
                if !eligible {
                    continue;
                }
                let dj = self.d[j];
                let slack = if free {
                    dj.abs()
                } else if up {
                    (-dj).max(0.0)
                } else {
                    dj.max(0.0)
                };
                let ratio = slack / alpha.abs();
                let take = match enter {
                    None => true,
                    Some(e) => {
                        if ratio < best_ratio - 1e-12 {
                            true
                        } else if ratio <= best_ratio + 1e-12 {
                            if bland {
                                var < self.nonbasic[e]
                            } else {
                                alpha.abs() > best_alpha
                            }
                        } else {
                            false
                        }
                    }
                };
                if take {
                    enter = Some(j);
                    best_ratio = best_ratio.min(ratio);
                    best_alpha = alpha.abs();
                }
            }
            let Some(c) = enter else {
                return Phase::Infeasible;
            };
            if best_ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            let alpha = self.tab[r * n + c];
            let delta = (target - self.value[leaving]) / alpha;
            self.shift_nonbasic(c, delta);
            self.value[leaving] = target;
            self.at_upper[leaving] = !increase;
            self.pivot(r, c);
            if self.since_reinvert >= self.opts.reinvert_every {
                self.reinvert();
            }
        }
    }

    fn primal_phase(&mut self, iters: &mut usize, limit: usize) -> Phase {
        let n = self.n;
        let dtol = self.opts.dual_tol;
        let pivot_tol = self.opts.pivot_tol;
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run > 3 * self.basis.len().max(1);
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..n {
                let var = self.nonbasic[j];
                if self.is_fixed(var) {
                    continue;
                }
                let dj = self.d[j];
                let free = !self.lower[var].is_finite() && !self.upper[var].is_finite();
                let gain = if free {
                    dj.abs()
                } else if self.at_upper[var] {
                    dj
                } else {
                    -dj
                };
                if gain <= dtol {
                    continue;
                }
                let better = match enter {
                    None => true,
                    Some((e, g)) => {
                        if bland {
                            var < self.nonbasic[e]
                        } else {
                            gain > g
                        }
                    }
                };
                if better {
                    enter = Some((j, gain));
                }
            }
            let Some((c, _)) = enter else {
                return Phase::Done;
            };
            if *iters >= limit {
                return Phase::Limit;
            }
            *iters += 1;

            let var = self.nonbasic[c];
            let free = !self.lower[var].is_finite() && !self.upper[var].is_finite();
            let dir = if free {
                if self.d[c] < 0.0 {
                    1.0
                } else {
                    -1.0
                }
            } else if self.at_upper[var] {
                -1.0
            } else {
                1.0
            };
            let mut t_max = self.upper[var] - self.lower[var];
            let mut leave: Option<(usize, bool)> = None;
            let mut best_alpha = 0.0f64;
            for (i, &b) in self.basis.iter().enumerate() {
                let alpha = self.tab[i * n + c] * dir;
                if alpha.abs() <= pivot_tol {
                    continue;
                }
                let v = self.value[b];
                let (t, to_upper) = if alpha > 0.0 {
                    if !self.upper[b].is_finite() {
                        continue;
                    }
                    (((self.upper[b] - v) / alpha).max(0.0), true)
                } else {
                    if !self.lower[b].is_finite() {
                        continue;
                    }
                    (((v - self.lower[b]) / -alpha).max(0.0), false)
                };
                let take = if t < t_max - 1e-12 {
                    true
                } else if t <= t_max + 1e-12 && leave.is_some() {
                    if bland {
                        b < self.basis[leave.unwrap().0]
                    } else {
                        alpha.abs() > best_alpha
                    }
                } else {
                    false
                };
                if take {
                    t_max = t_max.min(t);
                    leave = Some((i, to_upper));
                    best_alpha = alpha.abs();
                }
            }
            if !t_max.is_finite() {
                return Phase::Unbounded;
            }
            if t_max <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.shift_nonbasic(c, dir * t_max);
            match leave {
                None => {
                    let to_upper = dir > 0.0;
                    self.at_upper[var] = to_upper;
                    self.value[var] = if to_upper { self.upper[var] } else { self.lower[var] };
                }
                Some((r, to_upper)) => {
                    let leaving = self.basis[r];
                    self.value[leaving] = if to_upper { self.upper[leaving] } else { self.lower[leaving] };
                    self.at_upper[leaving] = to_upper;
                    self.pivot(r, c);
                    if self.since_reinvert >= self.opts.reinvert_every {
                        self.reinvert();
                    }
                }
            }
        }
    }

    fn purge(&mut self) {
        let n = self.n;
        let threshold = self.opts.purge_threshold.unwrap_or(2 * n.max(8));
        let deferred_active: Vec<usize> =
            (0..self.rows.len()).filter(|&r| self.rows[r].deferred && self.pos[n + r] != Pos::Inactive).collect();
        if deferred_active.len() <= threshold {
            return;
        }
        for r in deferred_active {
            let var = n + r;
            if let Pos::Basic(_) = self.pos[var] {
                let v = self.value[var];
                if v > self.lower[var] + 1e-6 && v < self.upper[var] - 1e-6 {
                    self.deactivate(r);
                }
            }
        }
    }

    fn activate_violated(&mut self) -> usize {
        let n = self.n;
        let tol = self.opts.primal_tol;
        let violated: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.pos[n + r] == Pos::Inactive && self.rows[r].violation(&self.value[..n]) > tol)
            .collect();
        for &r in &violated {
            self.activate(r);
        }
        violated.len()
    }

    fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.value[..self.n]).map(|(c, v)| c * v).sum()
    }

    fn clear_artificial(&mut self) -> bool {
        let mut unbounded = false;
        for var in 0..self.n {
            if !self.artificial[var] {
                continue;
            }
            let big = self.opts.artificial_bound;
            let at_artificial = matches!(self.pos[var], Pos::NonBasic(_)) && self.value[var].abs() >= big * 0.5;
            if at_artificial {
                unbounded = true;
                continue;
            }
            if self.lower[var] == -big {
                self.lower[var] = f64::NEG_INFINITY;
            }
            if self.upper[var] == big {
                self.upper[var] = INF;
            }
            self.artificial[var] = false;
        }
        unbounded
    }

    fn outcome(&self, status: Status, iterations: usize) -> Solution {
        let values = match status {
            Status::Optimal => self.value[..self.n].to_vec(),
            _ => Vec::new(),
        };
        Solution { status, objective: self.objective(), values, iterations }
    }
}

impl LpSolver for DualSimplex {
    fn num_cols(&self) -> usize {
        self.n
    }

    fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn add_rows(&mut self, rows: &[Row]) -> Result<(), LpError> {
        for row in rows {
            if let Some(&(c, _)) = row.coeffs.iter().find(|&&(c, _)| c >= self.n) {
                return Err(LpError::Dimension(format!("row references column {c} of {}", self.n)));
            }
            let r = self.rows.len();
            self.rows.push(row.clone());
            let (lo, hi) = row.sense.activity_bounds(row.rhs);
            self.cost.push(0.0);
            self.lower.push(lo);
            self.upper.push(hi);
            self.artificial.push(false);
            self.pos.push(Pos::Inactive);
            self.value.push(0.0);
            self.at_upper.push(false);
            if !row.deferred {
                self.activate(r);
            }
        }
        Ok(())
    }

    fn set_bounds(&mut self, col: usize, lower: f64, upper: f64) {
        assert!(col < self.n, "column {col} out of range");
        self.lower[col] = lower;
        self.upper[col] = upper;
        self.artificial[col] = false;
        if let Pos::NonBasic(j) = self.pos[col] {
            let tol = self.opts.dual_tol;
            let dj = self.d[j];
            let to_upper = if lower == upper || (dj > tol && lower.is_finite()) {
                false
            } else if dj < -tol && upper.is_finite() {
                true
            } else if self.at_upper[col] {
                upper.is_finite()
            } else {
                !lower.is_finite()
            };
            self.set_nonbasic_value(j, to_upper);
        }
    }

    fn bounds(&self, col: usize) -> (f64, f64) {
        (self.lower[col], self.upper[col])
    }

    fn solve(&mut self) -> Result<Solution, LpError> {
        self.purge();
        let limit = self.opts.max_iterations.unwrap_or(200 * (self.n + self.basis.len()) + 20_000);
        let mut iters = 0usize;
        let mut repairs = 0usize;
        self.recompute_basics();
        loop {
            self.make_dual_feasible();
            match self.dual_phase(&mut iters, limit) {
                Phase::Done => {}
                Phase::Infeasible => {
                    // Confirm on a freshly rebuilt tableau before giving up.
                    if repairs < 2 && self.since_reinvert > 0 {
                        repairs += 1;
                        self.reinvert();
                        continue;
                    }
                    return Ok(self.outcome(Status::Infeasible, iters));
                }
                Phase::Limit => return Ok(self.outcome(Status::IterationLimit, iters)),
                Phase::Unbounded => unreachable!(),
            }
            if self.dual_infeasible() {
                match self.primal_phase(&mut iters, limit) {
                    Phase::Done => {}
                    Phase::Unbounded => return Ok(self.outcome(Status::Unbounded, iters)),
                    Phase::Limit => return Ok(self.outcome(Status::IterationLimit, iters)),
                    Phase::Infeasible => unreachable!(),
                }
            }
            if self.residual() > 1e-9 {
                repairs += 1;
                if repairs > 5 {
                    return Ok(self.outcome(Status::IterationLimit, iters));
                }
                self.reinvert();
                continue;
            }
            if self.activate_violated() > 0 {
                continue;
            }
            break;
        }
        if self.clear_artificial() {
            return Ok(self.outcome(Status::Unbounded, iters));
        }
        Ok(self.outcome(Status::Optimal, iters))
    }
}
