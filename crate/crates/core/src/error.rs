use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFunctionError {
    #[error("{function}: domain error: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: String },
    #[error("{function}: truncation too short: {detail}")]
    Truncation {
        function: &'static str,
        detail: String,
    },
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation failed ({check}): {message}")]
    Validation { check: &'static str, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("r_max must be positive, got {0}")]
    NonPositiveRMax(f64),
    #[error("need at least one panel and one node per panel")]
    EmptyQuadrature,
    #[error("duplicate cusp form parameter r = {0}")]
    DuplicateCuspParameter(f64),
    #[error("coefficient vectors live on different grids")]
    GridMismatch,
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeatError {
    #[error("time must be {requirement}, got t = {t}")]
    BadTime { t: f64, requirement: &'static str },
    #[error("finite-difference step h = {h} must satisfy 0 < h < t = {t}")]
    BadStep { t: f64, h: f64 },
    #[error("resolvent parameter C = {0} must be positive")]
    BadResolvent(f64),
    #[error("oracle norm bound {0} must be at least 4")]
    BadNormBound(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}
