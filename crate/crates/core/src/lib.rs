pub mod bench;
pub mod bounds;
pub mod coloring;
pub mod cuts;
pub mod error;
pub mod graph;
pub mod io;
pub mod lp;
pub mod model;
pub mod polytope;
pub mod separation;
pub mod solver;

pub use error::{Error, Result};
