use thiserror::Error;

/// Position-annotated chart-text diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {func} undefined at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("singular metric: eigenvalue ratio {ratio:e} below threshold")]
    SingularMetric { ratio: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("immersion failure: Jacobian rank below {dim}")]
    ImmersionFailure { dim: usize },
    #[error("not locally strongly convex: determinant form is indefinite")]
    NonConvex,
    #[error("tangent frame with transversal is singular")]
    FrameSingular,
    #[error("internal consistency failure in {what}: residual {residual:e}")]
    Inconsistent { what: &'static str, residual: f64 },
    #[error("invalid composition spec: {0}")]
    InvalidSpec(String),
    #[error("unknown chart '{0}'")]
    UnknownChart(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cubic form is not totally symmetric (residual {residual:e})")]
    Asymmetric { residual: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
