use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite evaluation at s = {at}")]
    NonFiniteEvaluation { at: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("adaptive quadrature did not converge on [{a}, {b}] within {panels} panels")]
    QuadratureFailure { a: f64, b: f64, panels: usize },

    #[error("cumulative arc length is not strictly increasing near {at}")]
    NonMonotone { at: f64 },

    #[error("curvature {kappa:e} at s = {at} is below the frame cutoff")]
    VanishingCurvature { at: f64, kappa: f64 },

    #[error("first angular function has sin(alpha) = 0; developability condition is singular")]
    DegenerateAngle,

    #[error("({s}, {v}) lies outside the strip domain")]
    OutOfDomain { s: f64, v: f64 },

    #[error("crease speed factor {sigma:e} at s = {at} is below the endpoint cutoff")]
    EndpointSingularity { at: f64, sigma: f64 },

    #[error("weld failure: {0}")]
    WeldFailure(String),

    #[error("input is not a graph: {0}")]
    NonGraph(String),

    #[error("schedule violates deformation hypotheses: {0}")]
    ScheduleViolation(String),

    #[error("grid too coarse: need at least {needed} samples per axis, got {got}")]
    GridTooCoarse { needed: usize, got: usize },

    #[error("degenerate metric (EG - F^2 = {det:e}) at ({s}, {v})")]
    DegenerateMetric { s: f64, v: f64, det: f64 },

    #[error("crease samples are collinear; no unique plane")]
    CollinearSamples,

    #[error("triangle {index} is degenerate (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("mesh is not closed ({boundary_edges} boundary edges)")]
    NotClosed { boundary_edges: usize },

    #[error("mesh orientation is inconsistent across edge ({0}, {1})")]
    InconsistentOrientation(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
