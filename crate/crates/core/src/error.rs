use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("equilibrium classification failed: {0}")]
    ClassificationFailure(String),

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("degenerate manifold: {0}")]
    DegenerateManifold(String),

    #[error("threshold curve collapsed to {points} points at t = {t}")]
    CurveCollapse { t: f64, points: usize },

    #[error("parity segment passes through a curve vertex or overlaps an edge")]
    DegenerateIntersection,

    #[error("trajectory reached neither ON nor OFF state by t = {t_horizon}")]
    Unresolved { t_horizon: f64 },

    #[error(
        "class starvation after {draws} draws: {tipped} tipped, {not_tipped} not tipped (target {target} each)"
    )]
    ClassStarvation {
        draws: usize,
        tipped: usize,
        not_tipped: usize,
        target: usize,
    },

    #[error("labels contain a single class")]
    SingleClass,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
