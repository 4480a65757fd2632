//! The assignment formulation over colors `1..=ub`.
//!
//! Columns: `x_vj` at `(v − 1)·ub + (j − 1)`, then `w_j` at `n·ub + (j − 1)`.
//! Colors above `ub` are eliminated, `w_j = 1` is fixed for `j ≤ lb` and
//! `x_vj = 0` for `j > v`. The symmetry rows
//! `x_vj ≤ Σ_{u=j−1}^{v−1} x_{u,j−1}` are lazy: they sit in the solver's pool
//! and only enter the relaxation when violated.

use std::fmt;

use eqcol_simplex::{format, Problem, Row, Sense};

use crate::bounds::InitBounds;
use crate::coloring::EqColoring;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub ub: usize,
    pub lb: usize,
}

impl Layout {
    pub fn num_cols(&self) -> usize {
        self.n * self.ub + self.ub
    }

    pub fn x_col(&self, v: usize, j: usize) -> Option<usize> {
        (j >= 1 && j <= self.ub && v >= 1 && v <= self.n).then(|| (v - 1) * self.ub + (j - 1))
    }

    pub fn w_col(&self, j: usize) -> Option<usize> {
        (j >= 1 && j <= self.ub).then(|| self.n * self.ub + (j - 1))
    }

    /// Whether `x_vj` is fixed to zero by the ordering fixings.
    pub fn x_fixed_zero(&self, v: usize, j: usize) -> bool {
        j > v || j > self.ub
    }

    pub fn w_fixed_one(&self, j: usize) -> bool {
        j <= self.lb
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Assignment,
    Edge,
    Order,
    Isolated,
    EquityLower,
    EquityUpper,
    Lazy,
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowKind::Assignment => "assign",
            RowKind::Edge => "edge",
            RowKind::Order => "order",
            RowKind::Isolated => "isolated",
            RowKind::EquityLower => "equity-lower",
            RowKind::EquityUpper => "equity-upper",
            RowKind::Lazy => "lazy",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub layout: Layout,
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<(RowKind, Row)>,
}

/// `Σ_{k=j}^{ub} f(k)(w_k − w_{k+1})` telescoped to per-`w` coefficients.
fn telescoped(layout: &Layout, j: usize, f: impl Fn(usize) -> usize) -> Vec<(usize, f64)> {
    (j..=layout.ub)
        .map(|k| {
            let c = if k == j { f(k) as f64 } else { f(k) as f64 - f(k - 1) as f64 };
            (layout.w_col(k).unwrap(), c)
        })
        .filter(|&(_, c)| c != 0.0)
        .collect()
}

impl ModelSpec {
    pub fn build(g: &Graph, bounds: &InitBounds) -> Result<ModelSpec> {
        let n = g.n();
        let (lb, ub) = (bounds.lb, bounds.ub);
        if lb > ub {
            return Err(Error::Infeasible(format!("lower bound {lb} exceeds upper bound {ub}")));
        }
        if ub == 0 || ub > n {
            return Err(Error::Infeasible(format!("upper bound {ub} outside 1..={n}")));
        }
        let layout = Layout { n, ub, lb };
        let cols = layout.num_cols();
        let mut cost = vec![0.0; cols];
        let mut lower = vec![0.0; cols];
        let mut upper = vec![1.0; cols];
        for j in 1..=ub {
            let c = layout.w_col(j).unwrap();
            cost[c] = 1.0;
            if layout.w_fixed_one(j) {
                lower[c] = 1.0;
            }
            for v in 1..=n {
                if layout.x_fixed_zero(v, j) {
                    upper[layout.x_col(v, j).unwrap()] = 0.0;
                }
            }
        }

        let mut rows = Vec::new();
        let x = |v, j| layout.x_col(v, j).unwrap();
        let w = |j| layout.w_col(j).unwrap();
        for v in 1..=n {
            rows.push((RowKind::Assignment, Row::new((1..=ub).map(|j| (x(v, j), 1.0)).collect(), Sense::Eq, 1.0)));
        }
        for (u, v) in g.edges() {
            for j in 1..=ub {
                let row = Row::new(vec![(x(u, j), 1.0), (x(v, j), 1.0), (w(j), -1.0)], Sense::Le, 0.0);
                rows.push((RowKind::Edge, row.deferred()));
            }
        }
        for j in 1..ub {
            rows.push((RowKind::Order, Row::new(vec![(w(j + 1), 1.0), (w(j), -1.0)], Sense::Le, 0.0)));
        }
        for v in (1..=n).filter(|&v| g.degree(v) == 0) {
            for j in 1..=ub {
                rows.push((RowKind::Isolated, Row::new(vec![(x(v, j), 1.0), (w(j), -1.0)], Sense::Le, 0.0)));
            }
        }
        for j in 1..=ub.min(n - 1) {
            let column: Vec<(usize, f64)> = (1..=n).map(|v| (x(v, j), 1.0)).collect();
            let mut lo = column.clone();
            lo.extend(telescoped(&layout, j, |k| n / k).into_iter().map(|(c, a)| (c, -a)));
            rows.push((RowKind::EquityLower, Row::new(lo, Sense::Ge, 0.0)));
            let mut hi = column;
            hi.extend(telescoped(&layout, j, |k| n.div_ceil(k)).into_iter().map(|(c, a)| (c, -a)));
            rows.push((RowKind::EquityUpper, Row::new(hi, Sense::Le, 0.0)));
        }
        for j in 2..=ub {
            for v in j..=n {
                let mut coeffs = vec![(x(v, j), 1.0)];
                coeffs.extend((j - 1..v).map(|u| (x(u, j - 1), -1.0)));
                rows.push((RowKind::Lazy, Row::new(coeffs, Sense::Le, 0.0).deferred()));
            }
        }
        Ok(ModelSpec { layout, cost, lower, upper, rows })
    }

    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|(k, _)| *k == kind).count()
    }

    pub fn column_names(&self) -> Vec<String> {
        let Layout { n, ub, .. } = self.layout;
        let mut names = Vec::with_capacity(self.layout.num_cols());
        for v in 1..=n {
            for j in 1..=ub {
                names.push(format!("x{v}_{j}"));
            }
        }
        names.extend((1..=ub).map(|j| format!("w{j}")));
        names
    }

    pub fn to_problem(&self) -> Problem {
        let mut p = Problem::with_columns(self.cost.clone(), self.lower.clone(), self.upper.clone());
        p.rows = self.rows.iter().map(|(_, r)| r.clone()).collect();
        p.names = self.column_names();
        p
    }

    /// Human-readable LP text of the whole model (lazy rows marked).
    pub fn lp_text(&self) -> String {
        format::write_problem(&self.to_problem())
    }

    /// Column values encoding a coloring that uses at most `ub` colors.
    pub fn encode(&self, c: &EqColoring) -> Option<Vec<f64>> {
        let mut values = vec![0.0; self.layout.num_cols()];
        for j in 1..=c.k() {
            values[self.layout.w_col(j)?] = 1.0;
            for &v in c.class(j) {
                values[self.layout.x_col(v, j)?] = 1.0;
            }
        }
        Some(values)
    }
}

/// An LP solution viewed in model coordinates; colors above `ub` read as 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FracPoint {
    pub n: usize,
    pub ub: usize,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub objective: f64,
}

impl FracPoint {
    pub fn from_values(layout: &Layout, values: &[f64], objective: f64) -> Self {
        let split = layout.n * layout.ub;
        FracPoint {
            n: layout.n,
            ub: layout.ub,
            x: values[..split].to_vec(),
            w: values[split..split + layout.ub].to_vec(),
            objective,
        }
    }

    #[inline]
    pub fn x(&self, v: usize, j: usize) -> f64 {
        if j == 0 || j > self.ub {
            0.0
        } else {
            self.x[(v - 1) * self.ub + (j - 1)]
        }
    }

    #[inline]
    pub fn w(&self, j: usize) -> f64 {
        if j == 0 || j > self.ub {
            0.0
        } else {
            self.w[j - 1]
        }
    }

    pub fn is_integral(&self, tol: f64) -> bool {
        self.x.iter().chain(&self.w).all(|&a| (a - a.round()).abs() <= tol)
    }

    /// Decodes an integral point into a coloring.
    pub fn decode(&self, tol: f64) -> Option<EqColoring> {
        if !self.is_integral(tol) {
            return None;
        }
        let mut colors = vec![0; self.n];
        for (v, slot) in colors.iter_mut().enumerate() {
            let js: Vec<usize> = (1..=self.ub).filter(|&j| self.x(v + 1, j) > 0.5).collect();
            if js.len() != 1 {
                return None;
            }
            *slot = js[0];
        }
        EqColoring::from_colors(&colors).ok()
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.w);
        v
    }
}

/// Lazy symmetry rows violated by more than `tol` at `p`.
pub fn lazy_violations(layout: &Layout, p: &FracPoint, tol: f64) -> Vec<Row> {
    let mut out = Vec::new();
    for j in 2..=layout.ub {
        for v in j..=layout.n {
            let rhs: f64 = (j - 1..v).map(|u| p.x(u, j - 1)).sum();
            if p.x(v, j) - rhs > tol {
                let mut coeffs = vec![(layout.x_col(v, j).unwrap(), 1.0)];
                coeffs.extend((j - 1..v).map(|u| (layout.x_col(u, j - 1).unwrap(), -1.0)));
                out.push(Row::new(coeffs, Sense::Le, 0.0));
            }
        }
    }
    out
}

/// Default tolerance for lazy-row violations.
pub const LAZY_TOL: f64 = 1e-6;
