use thiserror::Error;

/// Errors raised by the series engine, the identity builders and the CLI front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two values built with different exponent denominators were combined.
    #[error("exponent denominator mismatch: {left} vs {right}")]
    DenominatorMismatch { left: u32, right: u32 },

    /// A division that must be exact left a remainder.
    #[error("inexact division: {0}")]
    Exactness(String),

    /// The lowest-order coefficient of a series is not a unit monomial.
    #[error("cannot invert: {0}")]
    Inversion(String),

    /// A sum or factor whose coefficients would not be finite at a fixed power of q.
    #[error("series is not q-graded: {0}")]
    Grading(String),

    /// Shell enumeration of a lattice sum failed to terminate within its guard.
    #[error("lattice sum did not terminate: {0}")]
    NonTermination(String),

    /// A builder produced a series that is not complete to the requested order.
    #[error("insufficient precision: series complete to {have}, need {need} (scaled units)")]
    Precision { have: i64, need: i64 },

    /// Bad configuration: denominators, environments, knob values.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    /// An environment or knob value that the identity record does not admit.
    #[error("constraint violation: {0}")]
    Constraint(String),

    /// Expression syntax error at a byte offset.
    #[error("syntax error at offset {offset}: expected one of {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;
