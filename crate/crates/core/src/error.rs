use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("window is degenerate after erosion by {r}")]
    DegenerateWindow { r: f64 },
    #[error("point ({x}, {y}) lies outside the window")]
    PointOutsideWindow { x: f64, y: f64 },
    #[error("point pattern is empty")]
    EmptyPattern,
    #[error("no data points in the eroded estimation window")]
    NoInteriorPoints,
    #[error("count distribution tail mass {tail:e} beyond n = {n_max} exceeds tolerance")]
    TailTooHeavy { n_max: usize, tail: f64 },
    #[error("determinantal process does not exist: rho * pi * kappa^2 = {value} > 1")]
    ExistenceViolated { value: f64 },
    #[error("covariance matrix is not positive definite even with jitter {jitter:e}")]
    CovarianceNotPD { jitter: f64 },
    #[error("gave up after {attempts} rejected attempts")]
    AttemptsExhausted { attempts: usize },
    #[error("cannot condition on {requested} points: only {available} eigenvalues are nonzero")]
    InfeasibleCount { requested: usize, available: usize },
    #[error("curves do not share the same r grid")]
    MismatchedGrids,
    #[error("need at least {needed} simulated curves, got {got}")]
    TooFewCurves { needed: usize, got: usize },
    #[error("optimiser did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
