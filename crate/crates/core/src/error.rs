use alloc::string::String;
use core::fmt;

use crate::Point;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its documented range.
    InvalidParameter { name: String, reason: String },
    /// An exponent-class function takes a value below 1.
    ExponentBelowOne { parameter: String, value: f64 },
    /// A real-class function was supplied where an exponent is required.
    NotAnExponent,
    /// Objects of different ambient dimension were combined.
    DimensionMismatch { expected: usize, found: usize },
    /// A function produced NaN or an infinity at a quadrature node.
    NonFiniteValue { node: Point, value: f64 },
    /// A norm, modular or integral is infinite.
    NormInfinite { context: String },
    /// A matrix that must be invertible is singular.
    SingularMatrix,
    /// A pointwise hypothesis failed; `witness` is the offending point.
    HypothesisViolation { condition: &'static str, witness: Point, detail: String },
    /// A scenario lacks a parameter that the requested quantity needs.
    MissingParameter(String),
    /// Declared Lipschitz constant is below the sampled lower bound.
    DeclaredInconsistent { declared: f64, empirical: f64 },
    /// A ratio was requested for an identically zero input.
    ZeroInput,
    /// Zero right-hand side with non-zero left-hand side.
    InequalityDegenerate { lhs: f64 },
    /// A scenario is structurally inconsistent with its theorem.
    Scenario(String),
}

impl Error {
    pub fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.into(), reason: reason.into() }
    }

    pub fn infinite(context: impl Into<String>) -> Self {
        Error::NormInfinite { context: context.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => write!(f, "invalid parameter `{name}`: {reason}"),
            Error::ExponentBelowOne { parameter, value } => {
                write!(f, "exponent takes value {value} < 1 (parameter `{parameter}`)")
            }
            Error::NotAnExponent => f.write_str("real-valued function used where an exponent is required"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFiniteValue { node, value } => {
                write!(f, "non-finite value {value} at node ({}, {}, {})", node[0], node[1], node[2])
            }
            Error::NormInfinite { context } => write!(f, "NORM_INFINITE: {context}"),
            Error::SingularMatrix => f.write_str("singular matrix"),
            Error::HypothesisViolation { condition, witness, detail } => write!(
                f,
                "hypothesis {condition} violated at ({}, {}, {}): {detail}",
                witness[0], witness[1], witness[2]
            ),
            Error::MissingParameter(name) => write!(f, "missing parameter `{name}`"),
            Error::DeclaredInconsistent { declared, empirical } => write!(
                f,
                "DECLARED_INCONSISTENT: declared Lipschitz constant {declared} below sampled {empirical}"
            ),
            Error::ZeroInput => f.write_str("ZERO_INPUT"),
            Error::InequalityDegenerate { lhs } => {
                write!(f, "INEQUALITY_DEGENERATE: zero right-hand side with lhs = {lhs}")
            }
            Error::Scenario(msg) => write!(f, "scenario: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
