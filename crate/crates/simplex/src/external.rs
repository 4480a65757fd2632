use std::path::PathBuf;
use std::process::Command;

use crate::format;
use crate::problem::{LpError, LpSolver, Problem, Row, Solution, Status};

/// Solves by invoking `program [args..] <problem-file> <solution-file>`.
///
/// The command sees the whole current problem on every call (no warm start).
/// Deferred rows are written with their `lazy` marker; a compliant command
/// must return a point satisfying them.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    program: PathBuf,
    args: Vec<String>,
    problem: Problem,
}

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>, args: Vec<String>, problem: Problem) -> Result<Self, LpError> {
        problem.validate()?;
        Ok(ExternalSolver { program: program.into(), args, problem })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }
}

impl LpSolver for ExternalSolver {
    fn num_cols(&self) -> usize {
        self.problem.num_cols()
    }

    fn num_rows(&self) -> usize {
        self.problem.rows.len()
    }

    fn add_rows(&mut self, rows: &[Row]) -> Result<(), LpError> {
        let n = self.problem.num_cols();
        for row in rows {
            if let Some(&(c, _)) = row.coeffs.iter().find(|&&(c, _)| c >= n) {
                return Err(LpError::Dimension(format!("row references column {c} of {n}")));
            }
            self.problem.rows.push(row.clone());
        }
        Ok(())
    }

    fn set_bounds(&mut self, col: usize, lower: f64, upper: f64) {
        self.problem.lower[col] = lower;
        self.problem.upper[col] = upper;
    }

    fn bounds(&self, col: usize) -> (f64, f64) {
        (self.problem.lower[col], self.problem.upper[col])
    }

    fn solve(&mut self) -> Result<Solution, LpError> {
        let dir = tempfile::tempdir()?;
        let lp_path = dir.path().join("problem.lp");
        let sol_path = dir.path().join("solution.txt");
        std::fs::write(&lp_path, format::write_problem(&self.problem))?;
        let output = Command::new(&self.program)
            .args(&self.args)
            .arg(&lp_path)
            .arg(&sol_path)
            .output()
            .map_err(|e| LpError::External(format!("cannot run {}: {e}", self.program.display())))?;
        if !output.status.success() {
            return Err(LpError::External(format!(
                "{} exited with {}: {}",
                self.program.display(),
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        let text = std::fs::read_to_string(&sol_path).map_err(|e| LpError::External(format!("no solution file written: {e}")))?;
        let sol = format::read_solution(&text)?;
        if sol.status == Status::Optimal && sol.values.len() != self.problem.num_cols() {
            return Err(LpError::External(format!(
                "solution has {} values for {} columns",
                sol.values.len(),
                self.problem.num_cols()
            )));
        }
        Ok(sol)
    }
}
