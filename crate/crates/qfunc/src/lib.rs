//! Exact-arithmetic kernel for q-calculus on truncated multivariate
//! formal power series.
//!
//! The crate provides, bottom up:
//!
//! * [`qcore`] — arbitrary-precision rationals, the immutable
//!   [`QContext`] (a fixed rational q, a global truncation order, and
//!   cached (q;q)_n values), and scalar q-combinatorics;
//! * [`series`] — sparse truncated multivariate series with an explicit
//!   exactness bound `exact_to`: every coefficient of total degree at
//!   most `exact_to` is exactly correct, nothing above it is claimed;
//! * [`qops`] — the Jackson q-derivative, the inverse dilation, the
//!   theta operator, and the q-exponential / Cauchy operator
//!   expansions, each acting with respect to a designated variable;
//! * [`equations`] — six q-functional equations as residual evaluators,
//!   solved two independent ways (operator expansion vs. coefficient
//!   recurrence) and cross-verified with exact, zero-tolerance checks.
//!
//! Every value is immutable and every operation is a pure function, so
//! independent computations can run concurrently without
//! synchronization. There is no floating point anywhere: all claims are
//! exact equalities of rationals, qualified only by `exact_to`.

pub mod equations;
mod error;
pub mod qcore;
pub mod qops;
pub mod series;

pub use equations::{
    adjudicate_thm_2_4, degeneration_check, residual, solve_operator, solve_operator_with,
    solve_recurrence, verify, verify_with_operator, DegenerationKind, EquationId, RecurrenceState,
    VerificationReport,
};
pub use error::{Error, Result};
pub use qcore::{QContext, Rational};
pub use qops::{
    apply_cauchy_dq, apply_cauchy_theta, apply_exp_operator, dq, eta_inv, pochhammer_series, theta,
    OperatorId,
};
pub use series::{from_json, monomials_up_to, to_json, ExponentVector, MultiSeries};
