//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors produced by construction, evaluation, and iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A fractional order was outside `(0, 1]`.
    InvalidOrder { name: &'static str, value: f64 },
    /// Boundary-condition coefficients were inadmissible (negative entry or
    /// nonpositive determinant `d`).
    InvalidParams(String),
    /// A stated precondition did not hold (grid too coarse, empty range,
    /// nonpositive tolerance, ...).
    Precondition(String),
    /// A function evaluation produced a non-finite or otherwise inadmissible
    /// value; `point` is where it happened.
    Evaluation { point: f64, detail: String },
    /// Evaluation of `f(s, x)` failed at the named point.
    Evaluation2 { s: f64, x: f64, detail: String },
    /// Expression syntax error at the given byte offset.
    Parse { offset: usize, detail: String },
    /// Fixed-point iteration left the admissible ball.
    Divergence { norm: f64, bound: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidOrder { name, value } => {
                write!(f, "order {name} = {value} is outside (0, 1]")
            }
            Error::InvalidParams(msg) => write!(f, "invalid boundary parameters: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Evaluation { point, detail } => {
                write!(f, "evaluation failed at t = {point}: {detail}")
            }
            Error::Evaluation2 { s, x, detail } => {
                write!(f, "evaluation failed at (s, x) = ({s}, {x}): {detail}")
            }
            Error::Parse { offset, detail } => {
                write!(f, "parse error at byte {offset}: {detail}")
            }
            Error::Divergence { norm, bound } => write!(
                f,
                "iteration diverged: |x| = {norm} exceeded {bound}; try damped iteration"
            ),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
