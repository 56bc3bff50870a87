//! Error type shared by all modules.

use std::fmt;

/// Everything that can go wrong in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two scalars live in distinct quadratic fields `Q(√d)`.
    MixedFields,
    /// Division by an exact zero.
    DivisionByZero,
    /// An input value lies outside the domain of the requested algorithm.
    OutOfDomain(String),
    /// An enclosure could not be tightened enough within the refinement cap
    /// to decide a floor/ceiling or comparison.
    NeedsMorePrecision,
    /// A non-positive tolerance was requested.
    InvalidTolerance,
    /// The remainder cycle search gave up after the given number of steps;
    /// the expansion may genuinely be aperiodic.
    PeriodNotFound(usize),
    /// Same failure while building an automaton, identifying the shift
    /// whose quasi-lazy word was not found.
    PeriodNotFoundAtShift { shift: usize, cap: usize },
    /// A digit exceeds the per-position alphabet maximum.
    AlphabetViolation {
        position: usize,
        digit: u32,
        max: u32,
    },
    /// The operation is only defined for a more restricted base family.
    UnsupportedBase(&'static str),
    /// Two automata were built with incompatible shape parameters.
    ShapeMismatch,
    /// Malformed textual input (scalar, digit word or base description).
    Parse(String),
    /// An invalid scalar construction (e.g. a negative radicand).
    InvalidNumber(String),
    /// A constructed automaton disagreed with the independent factor oracle.
    ValidationMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MixedFields => write!(f, "operands lie in distinct quadratic fields"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::OutOfDomain(msg) => write!(f, "value out of domain: {msg}"),
            Error::NeedsMorePrecision => {
                write!(f, "enclosure refinement cap reached before a decision")
            }
            Error::InvalidTolerance => write!(f, "tolerance must be positive"),
            Error::PeriodNotFound(cap) => {
                write!(f, "no remainder cycle found within {cap} steps")
            }
            Error::PeriodNotFoundAtShift { shift, cap } => write!(
                f,
                "no remainder cycle for base shift {shift} within {cap} steps"
            ),
            Error::AlphabetViolation {
                position,
                digit,
                max,
            } => write!(
                f,
                "digit {digit} at position {position} exceeds alphabet maximum {max}"
            ),
            Error::UnsupportedBase(what) => write!(f, "unsupported base family: {what}"),
            Error::ShapeMismatch => write!(f, "automata have incompatible shapes"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidNumber(msg) => write!(f, "invalid number: {msg}"),
            Error::ValidationMismatch(msg) => write!(f, "validation mismatch: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
