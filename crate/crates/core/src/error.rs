use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate curve segment {index}: consecutive samples coincide")]
    DegenerateSegment { index: usize },

    #[error("point ({x1}, {x2}) lies outside the unit square")]
    OutOfDomain { x1: f64, x2: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("backtracking failed: {0}")]
    Backtrack(String),

    #[error("SRV fields are antipodal (theta = {0}); the geodesic is undefined")]
    Antipodal(f64),

    #[error("grids are not nested: coarse N = {coarse} does not divide fine N = {fine}")]
    NonNestedGrids { coarse: usize, fine: usize },

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid_curve(msg: impl Into<String>) -> Self {
        Error::InvalidCurve(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
