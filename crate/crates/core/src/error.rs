use thiserror::Error;

/// Errors raised by the discretization, physics and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inadmissible state: {0}")]
    Inadmissible(String),

    #[error("invalid geometry: minimum jacobian {min_jacobian:e} in cell {cell}")]
    InvalidGeometry { cell: usize, min_jacobian: f64 },

    #[error("linear solve failed: non-positive pivot {pivot:e} at row {row}")]
    SolveFailure { row: usize, pivot: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
