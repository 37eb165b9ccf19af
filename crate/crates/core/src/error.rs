//! Error type shared by all simulator modules.

use thiserror::Error;

/// Errors produced by spline, circuit and solver operations.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("knot grid too small: need at least {need} intervals, got {got}")]
    GridTooSmall { need: usize, got: usize },

    #[error("knot {value} duplicates an existing knot (only simple knots are supported)")]
    DuplicateKnot { value: f64 },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("netlist contains no devices")]
    EmptyCircuit,

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("numerically singular pivot at block {block} (scalar row {row})")]
    SingularMatrix { block: usize, row: usize },

    #[error("Newton iteration failed to converge: {msg} (best residual {best_residual:.3e} after {iterations} iterations)")]
    NoConvergence {
        msg: String,
        iterations: usize,
        best_residual: f64,
    },

    #[error("frequency direction degenerate (z'z = {ztz:.3e}); omega is unobservable")]
    DegenerateFrequency { ztz: f64 },

    #[error("incomplete state: {0}")]
    State(String),

    #[error("envelope step underflow at tau = {tau:.6e}: step {step:.3e} below minimum {min_step:.3e} ({detail})")]
    StepUnderflow {
        tau: f64,
        step: f64,
        min_step: f64,
        detail: String,
    },

    #[error("requested time {t:.6e} outside stored range [{lo:.6e}, {hi:.6e}]")]
    Range { t: f64, lo: f64, hi: f64 },

    #[error("operating point computation failed: {0}")]
    OperatingPoint(String),

    #[error("initialization failed: {0}")]
    Initialization(String),

    #[error("unknown node '{0}'")]
    UnknownNode(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
