use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("system is infeasible")]
    Infeasible,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input is degenerate: {0}")]
    Degenerate(String),
    #[error("time budget of {0:?} exceeded")]
    BudgetExceeded(std::time::Duration),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
