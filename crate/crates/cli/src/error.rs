use rtip_core::Error;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 config, 2 convergence, 3 geometry, 4 class starvation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 1,
            CliError::Core(e) => match e {
                Error::InvalidParameter(_) | Error::Io(_) | Error::Json(_) => 1,
                Error::ConvergenceFailure(_)
                | Error::ClassificationFailure(_)
                | Error::NonFiniteState { .. }
                | Error::Unresolved { .. } => 2,
                Error::DegenerateManifold(_) | Error::CurveCollapse { .. } | Error::DegenerateIntersection => 3,
                Error::ClassStarvation { .. } | Error::SingleClass => 4,
            },
        }
    }
}
