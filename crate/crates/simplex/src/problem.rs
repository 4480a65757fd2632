use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    /// Bounds `[lo, hi]` on the row activity implied by this sense and `rhs`.
    pub fn activity_bounds(self, rhs: f64) -> (f64, f64) {
        match self {
            Sense::Le => (f64::NEG_INFINITY, rhs),
            Sense::Ge => (rhs, f64::INFINITY),
            Sense::Eq => (rhs, rhs),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One linear row `Σ coeff·x  sense  rhs` over structural columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    /// Deferred rows start in the pool and are activated when violated.
    pub deferred: bool,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        Row { coeffs, sense, rhs, deferred: false }
    }

    pub fn deferred(mut self) -> Self {
        self.deferred = true;
        self
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(c, a)| a * x[c]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        let (lo, hi) = self.sense.activity_bounds(self.rhs);
        (lo - act).max(act - hi).max(0.0)
    }
}

/// A minimization LP with bounded columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Problem {
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
    /// Optional column names, used only by the text format.
    pub names: Vec<String>,
}

impl Problem {
    pub fn with_columns(cost: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Problem { cost, lower, upper, rows: Vec::new(), names: Vec::new() }
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    pub fn add_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.cost.len();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Dimension(format!(
                "{} costs but {} lower and {} upper bounds",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        if !self.names.is_empty() && self.names.len() != n {
            return Err(LpError::Dimension(format!("{} names for {} columns", self.names.len(), n)));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(&(c, _)) = row.coeffs.iter().find(|&&(c, _)| c >= n) {
                return Err(LpError::Dimension(format!("row {i} references column {c} of {n}")));
            }
        }
        Ok(())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest row or bound violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let bounds = self.lower.iter().zip(&self.upper).zip(x).map(|((&lo, &hi), &v)| (lo - v).max(v - hi).max(0.0));
        let rows = self.rows.iter().map(|r| r.violation(x));
        bounds.chain(rows).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::IterationLimit => "iteration-limit",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub status: Status,
    /// Objective at `values`; for non-optimal outcomes this is the best
    /// bound the engine could certify.
    pub objective: f64,
    /// Structural column values (empty when the status carries no point).
    pub values: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("external solver: {0}")]
    External(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Incremental LP solver contract shared by the embedded engine and the
/// external-command bridge.
pub trait LpSolver {
    fn num_cols(&self) -> usize;
    /// Total rows known to the solver, active or pooled.
    fn num_rows(&self) -> usize;
    fn add_rows(&mut self, rows: &[Row]) -> Result<(), LpError>;
    fn set_bounds(&mut self, col: usize, lower: f64, upper: f64);
    fn bounds(&self, col: usize) -> (f64, f64);
    fn solve(&mut self) -> Result<Solution, LpError>;
}
