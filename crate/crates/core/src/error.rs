use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("invalid cut parameters: {0}")]
    InvalidCut(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("standing assumptions not met: {0}")]
    Assumptions(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Lp(#[from] eqcol_simplex::LpError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
