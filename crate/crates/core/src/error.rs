use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Syntax error from the expression parser.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Byte offset into the source where the error was detected.
    pub offset: usize,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<String>,
    /// What was actually found (`end of input` at the end).
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: expected ", self.offset)?;
        match self.expected.as_slice() {
            [] => write!(f, "nothing")?,
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("variable `{0}` is not allowed in this context")]
    UnexpectedVariable(String),

    #[error("domain error in {func}: argument {arg}")]
    Domain { func: String, arg: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate}, error bound {error_bound})"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("ODE integration aborted at t = {t} (step {step}): {reason}")]
    OdeAbort { t: f64, step: f64, reason: String },

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("shape operator is not self-adjoint with respect to the metric (defect {defect})")]
    NotSelfAdjoint { defect: f64 },

    #[error("degenerate immersion at ({x}, {y}): {reason}")]
    DegenerateImmersion { x: f64, y: f64, reason: String },

    #[error("angle function {theta} leaves (0, pi) at x = {x}")]
    AngleOutOfRange { x: f64, theta: f64 },

    #[error("point ({x}, {y}) lies outside the chart domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("classifier inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("JSON error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
