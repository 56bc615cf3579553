use thiserror::Error;

/// Errors raised across the library.
///
/// [`Error::exit_code`] maps each variant onto the CLI exit-code contract.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("points coincide or are too close: {0}")]
    DegeneratePoints(&'static str),
    #[error("segments overlap along a common geodesic")]
    CollinearOverlap,
    #[error("argument outside the domain of {what}: {value}")]
    DomainError { what: &'static str, value: f64 },
    #[error("isometry classification is ill-conditioned (margin {margin:e})")]
    IllConditioned { margin: f64 },
    #[error("point ({x}, {y}) lies outside the unit disk")]
    OutsideDisk { x: f64, y: f64 },
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("point is not on the hyperboloid (<p,p> = {0})")]
    NotOnHyperboloid(f64),
    #[error("all points lie on a common geodesic")]
    DegenerateHull,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("line does not support the polygon: {0}")]
    NotSupporting(String),
    #[error("invalid vertex count {0}: expected an odd integer >= 3")]
    InvalidN(usize),
    #[error("no convergence: {0}")]
    ConvergenceFailure(String),
    #[error("not an ordinary reduced polygon: {0}")]
    NotOrdinaryReduced(String),
    #[error("closure isometry is not a half-turn about p_1: {0}")]
    ClosureViolation(String),
    #[error("coverage gap at disk point ({x}, {y}), nearest butterfly violation {nearest:e}")]
    CoverageGap { x: f64, y: f64, nearest: f64 },
    #[error("sample rejected: {0}")]
    ValidationFailure(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Process exit code: 1 for validation failures, 2 for numerical
    /// non-convergence, 3 for malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConvergenceFailure(_) | Error::IllConditioned { .. } => 2,
            Error::Malformed(_)
            | Error::NotOnHyperboloid(_)
            | Error::OutsideDisk { .. }
            | Error::InvalidN(_)
            | Error::InvalidPolygon(_)
            | Error::DegenerateHull
            | Error::DegeneratePoints(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
