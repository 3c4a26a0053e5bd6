use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:.3e})")]
    RootsNotConverged {
        iterations: usize,
        worst_residual: f64,
    },

    #[error("invalid set specification: {0}")]
    InvalidSpec(String),

    #[error("operation not supported for this set variant: {0}")]
    Unsupported(String),

    #[error("boundary sample too small: {got} points, need at least {need}")]
    SampleTooSmall { got: usize, need: usize },

    #[error("could not bracket a boundary point: {0}")]
    Bracket(String),

    #[error("boundary refinement cap of {rounds} rounds exceeded")]
    RefinementCap { rounds: usize },

    #[error("orthogonal basis breakdown at degree {degree} (rank loss)")]
    BasisBreakdown { degree: usize },

    #[error("degree {degree} outside solver range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("test point {re}+{im}i lies inside the convex hull")]
    InsideHull { re: f64, im: f64 },

    #[error("requested {requested} Leja points from a sample of {available}")]
    TooFewSamplePoints { requested: usize, available: usize },

    #[error("exchange algorithm failed: {0}")]
    Exchange(String),

    #[error("linear program infeasible or unbounded: {0}")]
    LinearProgram(String),

    #[error("invalid solver configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
