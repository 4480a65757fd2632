//! A small linear-programming toolkit built around a dense, bounded-variable
//! simplex engine.
//!
//! The engine keeps a condensed tableau (one column per nonbasic variable), so
//! rows can be added and removed between solves and the previous basis is
//! reused. Rows may be marked *deferred*: they stay in a pool and only enter
//! the tableau once a solution violates them. The final solution of every
//! solve satisfies all rows, active or pooled.
//!
//! [`ExternalSolver`] implements the same [`LpSolver`] contract by shelling out
//! to a command that reads and writes the text formats of [`format`].

mod engine;
mod external;
pub mod format;
mod problem;

pub use engine::{DualSimplex, EngineOptions};
pub use external::ExternalSolver;
pub use problem::{LpError, LpSolver, Problem, Row, Sense, Solution, Status};

/// Solves `problem` from scratch with the embedded engine.
pub fn solve(problem: &Problem) -> Result<Solution, LpError> {
    let mut engine = DualSimplex::new(problem, EngineOptions::default())?;
    engine.solve()
}
