//! Sparse truncated multivariate formal power series with exactness
//! tracking.
//!
//! A [`MultiSeries`] stores finitely many terms of a formal power series
//! together with a bound `exact_to`: every coefficient of total degree
//! `<= exact_to` is exactly correct, and nothing is stored or claimed
//! above that bound. The truncation regime is a single total-degree
//! bound per series (not per-variable caps), because total degree is the
//! quantity the q-operator applications preserve: the degree lost by a
//! power of D_q or theta in one variable is exactly compensated by the
//! attached power of the expansion variable.
//!
//! Everything is immutable; every operation returns a fresh series in
//! canonical form (no zero coefficients, no term above `exact_to`,
//! terms ordered lexicographically by exponent vector).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::{QContext, Rational};

mod exponent;
mod json;

pub use exponent::{monomials_up_to, ExponentVector};
pub use json::{from_json, to_json};

/// Sparse truncated multivariate formal power series over exact
/// rationals.
///
/// Two series are equal iff they declare the same variables in the same
/// order, have the same `exact_to`, and have identical term maps.
#[derive(Clone)]
pub struct MultiSeries {
    ctx: Arc<QContext>,
    vars: Vec<String>,
    exact_to: u32,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl MultiSeries {
    /// Canonicalizing constructor: duplicate exponent vectors are
    /// summed, zero coefficients dropped.
    pub fn new<S: Into<String>>(
        ctx: &Arc<QContext>,
        vars: impl IntoIterator<Item = S>,
        exact_to: u32,
        terms: impl IntoIterator<Item = (ExponentVector, Rational)>,
    ) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        if exact_to > ctx.max_order() {
            return Err(Error::DegreeOverflow {
                degree: exact_to,
                bound: ctx.max_order(),
            });
        }
        let mut map: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: vars.len(),
                    got: exp.len(),
                });
            }
            let degree = exp.total_degree();
            if degree > exact_to {
                return Err(Error::DegreeOverflow {
                    degree,
                    bound: exact_to,
                });
            }
            match map.entry(exp) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(coef);
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    *slot.get_mut() += &coef;
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiSeries {
            ctx: Arc::clone(ctx),
            vars,
            exact_to,
            terms: map,
        })
    }

    pub fn zero<S: Into<String>>(
        ctx: &Arc<QContext>,
        vars: impl IntoIterator<Item = S>,
        exact_to: u32,
    ) -> Result<Self> {
        Self::new(ctx, vars, exact_to, std::iter::empty())
    }

    pub fn constant<S: Into<String>>(
        ctx: &Arc<QContext>,
        vars: impl IntoIterator<Item = S>,
        exact_to: u32,
        value: Rational,
    ) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let exp = ExponentVector::zeros(vars.len());
        Self::new(ctx, vars, exact_to, [(exp, value)])
    }

    /// The degree-one monomial `var`.
    pub fn variable<S: Into<String>>(
        ctx: &Arc<QContext>,
        vars: impl IntoIterator<Item = S>,
        exact_to: u32,
        var: &str,
    ) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let idx = vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        let exp = ExponentVector::unit(vars.len(), idx);
        Self::new(ctx, vars, exact_to, [(exp, Rational::one())])
    }

    /// Deterministic pseudo-random series: one coefficient per monomial
    /// of total degree <= `exact_to`, each an integer drawn uniformly
    /// from [-coef_bound, coef_bound]. The same (seed, vars, exact_to,
    /// coef_bound) always yields the same series.
    pub fn random<S: Into<String>>(
        ctx: &Arc<QContext>,
        seed: u64,
        vars: impl IntoIterator<Item = S>,
        exact_to: u32,
        coef_bound: u32,
    ) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = coef_bound as i64;
        let terms: Vec<(ExponentVector, Rational)> = monomials_up_to(vars.len(), exact_to)
            .into_iter()
            .map(|exp| {
                let c = rng.gen_range(-bound..=bound);
                (exp, Rational::from_integer(c))
            })
            .collect();
        Self::new(ctx, vars, exact_to, terms)
    }

    pub fn ctx(&self) -> &Arc<QContext> {
        &self.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn exact_to(&self) -> u32 {
        self.exact_to
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponent vector.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    /// The lexicographically smallest stored term, if any.
    pub fn first_term_lex(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().next()
    }

    /// Largest total degree among stored terms (None for the zero
    /// series).
    pub fn max_stored_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    pub fn var_index(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    fn check_compatible(&self, other: &MultiSeries) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    fn with_terms(&self, exact_to: u32, terms: BTreeMap<ExponentVector, Rational>) -> MultiSeries {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        debug_assert!(terms.keys().all(|e| e.total_degree() <= exact_to));
        MultiSeries {
            ctx: Arc::clone(&self.ctx),
            vars: self.vars.clone(),
            exact_to,
            terms,
        }
    }

    /// Coefficient-wise sum; `exact_to` of the result is the minimum of
    /// the operands' bounds and terms above it are dropped.
    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_compatible(other)?;
        let exact_to = self.exact_to.min(other.exact_to);
        let mut terms = BTreeMap::new();
        for (exp, coef) in self.terms.iter().chain(other.terms.iter()) {
            if exp.total_degree() > exact_to {
                continue;
            }
            match terms.entry(exp.clone()) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(coef.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    *slot.get_mut() += coef;
                }
            }
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(self.with_terms(exact_to, terms))
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.scale(&Rational::from_integer(-1)))
    }

    /// Convolution product truncated to the minimum of the operands'
    /// exactness bounds.
    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_compatible(other)?;
        let exact_to = self.exact_to.min(other.exact_to);
        let mut terms: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = ea.total_degree();
            if da > exact_to {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + eb.total_degree() > exact_to {
                    continue;
                }
                let exp = ea.add(eb);
                let prod = ca * cb;
                match terms.entry(exp) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() += &prod;
                    }
                }
            }
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(self.with_terms(exact_to, terms))
    }

    /// Every coefficient multiplied by `r`; `exact_to` unchanged.
    pub fn scale(&self, r: &Rational) -> MultiSeries {
        if r.is_zero() {
            return self.with_terms(self.exact_to, BTreeMap::new());
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect();
        self.with_terms(self.exact_to, terms)
    }

    /// Re-declare the series over `new_vars`, which must contain every
    /// current variable (reordering is allowed); fresh variables get
    /// exponent zero everywhere. `exact_to` is unchanged.
    pub fn extend_vars<S: Into<String>>(
        &self,
        new_vars: impl IntoIterator<Item = S>,
    ) -> Result<MultiSeries> {
        let new_vars: Vec<String> = new_vars.into_iter().map(Into::into).collect();
        for (i, v) in new_vars.iter().enumerate() {
            if new_vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        let mut positions = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let idx = new_vars
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            positions.push(idx);
        }
        let terms: BTreeMap<ExponentVector, Rational> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut entries = vec![0u32; new_vars.len()];
                for (old_idx, &new_idx) in positions.iter().enumerate() {
                    entries[new_idx] = e.get(old_idx);
                }
                (ExponentVector::new(entries), c.clone())
            })
            .collect();
        Ok(MultiSeries {
            ctx: Arc::clone(&self.ctx),
            vars: new_vars,
            exact_to: self.exact_to,
            terms,
        })
    }

    /// The substitution `var -> q^m * var`: the coefficient of a term
    /// with var-exponent k picks up the factor q^{m k}. `exact_to` is
    /// unchanged. Negative m realizes `var -> var / q^|m|`.
    pub fn dilate(&self, var: &str, m: i64) -> Result<MultiSeries> {
        let idx = self.var_index(var)?;
        if m == 0 {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let k = e.get(idx) as i64;
                (e.clone(), c * &self.ctx.q_pow(m * k))
            })
            .collect();
        Ok(self.with_terms(self.exact_to, terms))
    }

    /// Shift every exponent vector by `e`. This is exactness-gaining
    /// (`exact_to` becomes `min(exact_to + deg e, max_order)`), so it
    /// must be loss-free: a stored term pushed past `max_order` is an
    /// error, not a truncation.
    pub fn mul_by_monomial(&self, e: &ExponentVector) -> Result<MultiSeries> {
        if e.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: e.len(),
            });
        }
        let shift = e.total_degree();
        if let Some(max_deg) = self.max_stored_degree() {
            if max_deg + shift > self.ctx.max_order() {
                return Err(Error::DegreeOverflow {
                    degree: max_deg + shift,
                    bound: self.ctx.max_order(),
                });
            }
        }
        let exact_to = (self.exact_to + shift).min(self.ctx.max_order());
        let terms = self
            .terms
            .iter()
            .map(|(exp, c)| (exp.add(e), c.clone()))
            .collect();
        Ok(self.with_terms(exact_to, terms))
    }

    /// Exact division by `var`: decrement its exponent on every term.
    /// Errors with [`Error::NotDivisible`] if any term has var-exponent
    /// zero — for q-derivative style numerators that signals a violated
    /// cancellation. `exact_to` decreases by one.
    pub fn divide_by_var(&self, var: &str) -> Result<MultiSeries> {
        let idx = self.var_index(var)?;
        if self.exact_to == 0 {
            return Err(Error::ExactnessExhausted);
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e.get(idx);
            if k == 0 {
                return Err(Error::NotDivisible(var.to_string()));
            }
            terms.insert(e.with_entry(idx, k - 1), c.clone());
        }
        Ok(self.with_terms(self.exact_to - 1, terms))
    }

    /// Keep only the terms with var-exponent zero; the variable remains
    /// declared and `exact_to` is unchanged.
    pub fn set_var_zero(&self, var: &str) -> Result<MultiSeries> {
        let idx = self.var_index(var)?;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.get(idx) == 0)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Ok(self.with_terms(self.exact_to, terms))
    }

    /// The stored coefficient at `e`, or zero if absent. Asking above
    /// `exact_to` is an error: the value there is unknown, not zero.
    pub fn coefficient(&self, e: &ExponentVector) -> Result<Rational> {
        if e.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: e.len(),
            });
        }
        let degree = e.total_degree();
        if degree > self.exact_to {
            return Err(Error::OutsideExactRegion {
                degree,
                exact_to: self.exact_to,
            });
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    /// Drop a declared variable that no stored term uses.
    pub(crate) fn drop_unused_var(&self, var: &str) -> Result<MultiSeries> {
        let idx = self.var_index(var)?;
        if self.terms.keys().any(|e| e.get(idx) != 0) {
            return Err(Error::BoundaryMentionsVariable(var.to_string()));
        }
        let vars: Vec<String> = self
            .vars
            .iter()
            .filter(|v| v.as_str() != var)
            .cloned()
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let entries: Vec<u32> = e
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != idx)
                    .map(|(_, &v)| v)
                    .collect();
                (ExponentVector::new(entries), c.clone())
            })
            .collect();
        Ok(MultiSeries {
            ctx: Arc::clone(&self.ctx),
            vars,
            exact_to: self.exact_to,
            terms,
        })
    }
}

impl PartialEq for MultiSeries {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.exact_to == other.exact_to && self.terms == other.terms
    }
}

impl Eq for MultiSeries {}

impl fmt::Display for MultiSeries {
    /// Human-readable expansion, terms in ascending lexicographic order:
    /// `a^2 - 3/2*a*b + c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coef)) in self.terms.iter().enumerate() {
            let negative = coef.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coef.abs();
            let mono = self.render_monomial(exp);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultiSeries[{} | vars {:?} | exact_to {}]",
            self, self.vars, self.exact_to
        )
    }
}

impl MultiSeries {
    fn render_monomial(&self, exp: &ExponentVector) -> String {
        let mut parts = Vec::new();
        for (v, &k) in self.vars.iter().zip(exp.entries()) {
            match k {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{v}^{k}")),
            }
        }
        parts.join("*")
    }
}
