//! Error type shared by the whole kernel.

use thiserror::Error;

/// Errors raised by context construction, series operations, operator
/// applications, and equation solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// q is 0, 1 or -1, so some 1 - q^n vanishes and operator weights
    /// stop being invertible.
    #[error("degenerate q: {0} (q must not be 0, 1 or -1)")]
    DegenerateQ(String),

    /// An index exceeded the range cached or guaranteed by the context.
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: i64, max: i64 },

    /// An exponent vector's length does not match the variable count.
    #[error("exponent vector has {got} entries, series declares {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },

    /// A term's total degree exceeds the allowed bound.
    #[error("degree overflow: total degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },

    /// The same variable name was declared twice.
    #[error("duplicate variable name: {0}")]
    DuplicateVariable(String),

    /// Two series built over different q-contexts were combined.
    #[error("context mismatch: operands have different q or max_order")]
    ContextMismatch,

    /// Two series over different variable lists were combined.
    #[error("variable mismatch: operands declare different variables")]
    VariableMismatch,

    /// A named variable is not declared by the series.
    #[error("unknown variable: {0}")]
    UnknownVariable(String),

    /// Exact division by a variable failed because some term does not
    /// contain it. For q-derivative style numerators this signals a
    /// violated cancellation.
    #[error("not divisible: term with zero exponent in variable {0}")]
    NotDivisible(String),

    /// A coefficient was requested above the series' exactness bound;
    /// the value there is unknown, not zero.
    #[error("outside exact region: degree {degree} exceeds exact_to {exact_to}")]
    OutsideExactRegion { degree: u32, exact_to: u32 },

    /// exact_to is already 0, so no further degree-lowering operation
    /// can produce a claimable coefficient.
    #[error("exactness exhausted: exact_to is already 0")]
    ExactnessExhausted,

    /// A fresh variable for an operator expansion is already declared.
    #[error("variable collision: {0} is already declared by the series")]
    VariableCollision(String),

    /// The series does not declare a variable the equation requires.
    #[error("missing role variable: {0}")]
    MissingRoleVariable(String),

    /// Boundary data must have degree zero in the boundary variable.
    #[error("boundary mentions the boundary variable {0}")]
    BoundaryMentionsVariable(String),

    /// Malformed rational literal.
    #[error("invalid rational literal: {0:?}")]
    InvalidRational(String),

    /// Malformed series input (JSON or inline form).
    #[error("invalid series input: {0}")]
    InvalidSeries(String),

    /// Unrecognized operator or equation name.
    #[error("unknown name: {0:?}")]
    UnknownName(String),

    /// An operator was dispatched to an equation or application form it
    /// does not fit.
    #[error("operator mismatch: {0}")]
    OperatorMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
