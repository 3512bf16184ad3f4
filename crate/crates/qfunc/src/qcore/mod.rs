//! Exact rational arithmetic, the q-context, and scalar q-combinatorial
//! quantities: (q;q)_n, (x;q)_n, Gaussian binomials.

mod context;
mod rational;

pub use context::QContext;
pub use rational::Rational;
