use thiserror::Error;

use crate::expr::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("collocation order must be at least {min}, got {got}")]
    InvalidOrder { got: usize, min: usize },

    #[error("invalid domain [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidDomain { a: f64, b: f64 },

    #[error("boundary condition {c}*y + {d}*y' = 0 is degenerate")]
    DegenerateBoundary { c: f64, d: f64 },

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("coefficient {coefficient} must be positive, found {value} at x = {x}")]
    NonPositive {
        coefficient: &'static str,
        x: f64,
        value: f64,
    },

    #[error("coefficient {coefficient} failed at grid node {node} (x = {x}): {source}")]
    NodeEvaluation {
        coefficient: &'static str,
        node: usize,
        x: f64,
        source: ExprError,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("boundary conditions are singular after discretization")]
    SingularBoundary,

    #[error("dense eigensolver did not converge at N = {n}")]
    EigenSolver { n: usize },

    #[error("no real eigenvalues retained at N = {n}")]
    EmptySpectrum { n: usize },

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("x = {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("unknown builtin example {0}; expected 1, 2 or 3")]
    UnknownExample(u32),

    #[error("example 2 needs a truncation half-width d > 0")]
    MissingTruncation,

    #[error("problem file: missing key `{0}`")]
    MissingKey(String),

    #[error("problem file line {line}, key `{key}`: {message}")]
    ProblemFile {
        line: usize,
        key: String,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Invalid(String),
}
