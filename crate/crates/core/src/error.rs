use thiserror::Error;

pub type Result<T> = std::result::Result<T, DsmError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DsmError {
    #[error("domain error in {func}: argument {value} is outside the supported domain")]
    Domain { func: &'static str, value: f64 },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: u32, max: u32 },

    #[error("kernel singularity: source and target points coincide")]
    Singularity,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty discretization: no cell with nonzero contrast lies inside any shape")]
    EmptyDiscretization,

    #[error("linear solve failed (pivot ratio {pivot_ratio:.3e})")]
    SingularSystem { pivot_ratio: f64 },

    #[error("evaluation point ({x}, {y}) lies inside the scatterer support")]
    EvaluationPoint { x: f64, y: f64 },

    #[error("degenerate data: measured field has zero norm")]
    DegenerateData,

    #[error("series did not converge: {0}")]
    SeriesDivergence(String),

    #[error("indicator grids do not share the same sampling lattice")]
    GridMismatch,

    #[error("wrong sample count: expected {expected}, got {got}")]
    SampleCount { expected: usize, got: usize },

    #[error("unknown scenario id `{0}`")]
    UnknownScenario(String),

    #[error("parse error: {0}")]
    Parse(String),
}
