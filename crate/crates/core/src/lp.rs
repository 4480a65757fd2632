//! LP relaxations of the model, solved by the embedded engine or an external
//! command.

use std::path::PathBuf;

use eqcol_simplex::{DualSimplex, EngineOptions, ExternalSolver, LpSolver, Row, Status};

use crate::error::Result;
use crate::model::{lazy_violations, FracPoint, Layout, ModelSpec, LAZY_TOL};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum EngineChoice {
    #[default]
    Embedded,
    /// `program [args..] <problem-file> <solution-file>`, see
    /// [`eqcol_simplex::format`].
    External { program: PathBuf, args: Vec<String> },
}

#[derive(Clone, Debug)]
pub struct LPOutcome {
    pub status: Status,
    pub point: Option<FracPoint>,
    /// Valid lower bound on the relaxation: the optimum when optimal, `+∞`
    /// when infeasible and `−∞` when nothing is known.
    pub bound: f64,
    pub iterations: usize,
}

impl LPOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

/// A relaxation that can be tightened and re-solved.
pub struct Relaxation {
    layout: Layout,
    solver: Box<dyn LpSolver + Send>,
}

impl Relaxation {
    pub fn new(model: &ModelSpec, engine: &EngineChoice) -> Result<Self> {
        let problem = model.to_problem();
        let solver: Box<dyn LpSolver + Send> = match engine {
            EngineChoice::Embedded => Box::new(DualSimplex::new(&problem, EngineOptions::default())?),
            EngineChoice::External { program, args } => Box::new(ExternalSolver::new(program, args.clone(), problem)?),
        };
        Ok(Relaxation { layout: model.layout, solver })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn num_rows(&self) -> usize {
        self.solver.num_rows()
    }

    pub fn add_rows(&mut self, rows: &[Row]) -> Result<()> {
        Ok(self.solver.add_rows(rows)?)
    }

    pub fn set_bounds(&mut self, col: usize, lower: f64, upper: f64) {
        self.solver.set_bounds(col, lower, upper);
    }

    pub fn bounds(&self, col: usize) -> (f64, f64) {
        self.solver.bounds(col)
    }

    /// Solves the current relaxation. Any symmetry row the returned point
    /// still violates is added and the relaxation re-solved.
    pub fn solve(&mut self) -> Result<LPOutcome> {
        let mut iterations = 0;
        loop {
            let sol = self.solver.solve()?;
            iterations += sol.iterations;
            match sol.status {
                Status::Optimal => {
                    let point = FracPoint::from_values(&self.layout, &sol.values, sol.objective);
                    let missing = lazy_violations(&self.layout, &point, LAZY_TOL);
                    if !missing.is_empty() {
                        self.solver.add_rows(&missing)?;
                        continue;
                    }
                    return Ok(LPOutcome { status: sol.status, bound: sol.objective, point: Some(point), iterations });
                }
                Status::Infeasible => return Ok(LPOutcome { status: sol.status, point: None, bound: f64::INFINITY, iterations }),
                _ => return Ok(LPOutcome { status: sol.status, point: None, bound: f64::NEG_INFINITY, iterations }),
            }
        }
    }

    /// Adds `rows` and re-solves from the current basis.
    pub fn resolve_with_rows(&mut self, rows: &[Row]) -> Result<LPOutcome> {
        self.add_rows(rows)?;
        self.solve()
    }
}

/// One-shot solve of the model's relaxation.
pub fn solve_lp(model: &ModelSpec, engine: &EngineChoice) -> Result<LPOutcome> {
    Relaxation::new(model, engine)?.solve()
}
