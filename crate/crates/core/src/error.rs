use thiserror::Error;

/// Errors raised by the numeric and symbolic engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no admissible pencil found after {attempts} attempts")]
    PencilNotFound { attempts: usize },

    #[error("fiber restriction has degree {found} < {expected}")]
    FiberDegenerate { found: usize, expected: usize },

    #[error("two fiber roots within clustering tolerance (gap {gap:.3e})")]
    NearBranch { gap: f64 },

    #[error("branch value with multiplicity > 2 or singular branch point: {0}")]
    MultiplicityAnomaly(String),

    #[error("root continuation ambiguous after maximal step refinement")]
    ContinuationAmbiguous,

    #[error("topology mismatch: {0}")]
    TopologyMismatch(String),

    #[error("sheet adjacency graph is disconnected")]
    DisconnectedSheets,

    #[error("degenerate face {face}: edge lengths violate the triangle inequality")]
    DegenerateFace { face: usize },

    #[error("gradient too small for the analytic curvature route ({0:.3e})")]
    NearSingularGradient(f64),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    SolverDivergence { iterations: usize, residual: f64 },

    #[error("inconsistent Chern data: {0}")]
    NegativeDegree(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
