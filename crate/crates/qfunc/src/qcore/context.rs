//! The q-context: a fixed exact rational q, the global truncation
//! order, and the cached q-factorials (q;q)_n.

use std::fmt;

use crate::error::{Error, Result};
use crate::qcore::Rational;

/// Immutable evaluation context shared by every series.
///
/// Holds the exact rational value of q, the global truncation bound
/// `max_order`, and (q;q)_n for all 0 <= n <= max_order. Requiring
/// q outside {0, 1, -1} guarantees 1 - q^n != 0 for every n >= 1
/// (a rational other than +-1 is never a root of unity), so every
/// operator weight 1/(q;q)_n is well defined.
#[derive(Clone)]
pub struct QContext {
    q: Rational,
    max_order: u32,
    q_factorial_cache: Vec<Rational>,
    magnitude_warning: bool,
}

impl QContext {
    /// Build a context with the cache fully populated up to `max_order`.
    ///
    /// Rejects q in {0, 1, -1}. Any other rational is accepted; when
    /// |q| >= 1 the context carries a non-fatal warning flag, since the
    /// identities checked here are formal and hold regardless of
    /// magnitude.
    pub fn new(q: Rational, max_order: u32) -> Result<Self> {
        if q.is_zero() || q.is_one() || q == Rational::from_integer(-1) {
            return Err(Error::DegenerateQ(q.to_string()));
        }
        let magnitude_warning = q.abs() >= Rational::one();
        let mut cache = Vec::with_capacity(max_order as usize + 1);
        cache.push(Rational::one());
        let mut q_pow = Rational::one();
        for n in 1..=max_order {
            q_pow *= &q;
            let prev = &cache[(n - 1) as usize];
            cache.push(prev * &(Rational::one() - &q_pow));
        }
        Ok(QContext {
            q,
            max_order,
            q_factorial_cache: cache,
            magnitude_warning,
        })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// True when |q| >= 1; informational only.
    pub fn magnitude_warning(&self) -> bool {
        self.magnitude_warning
    }

    /// q^k for any integer k (q is nonzero, so negative k is fine).
    pub fn q_pow(&self, k: i64) -> Rational {
        self.q.pow_i(k)
    }

    /// (q;q)_n from the cache, for 0 <= n <= max_order.
    pub fn q_factorial(&self, n: u32) -> Result<&Rational> {
        self.q_factorial_cache
            .get(n as usize)
            .ok_or(Error::IndexOutOfRange {
                index: n as i64,
                max: self.max_order as i64,
            })
    }

    /// The q-shifted factorial (x;q)_n = prod_{k=0}^{n-1} (1 - x q^k);
    /// the empty product is 1.
    pub fn q_pochhammer_scalar(&self, x: &Rational, n: u32) -> Rational {
        let mut acc = Rational::one();
        let mut xq = x.clone();
        for _ in 0..n {
            acc *= &(Rational::one() - &xq);
            xq *= &self.q;
        }
        acc
    }

    /// Gaussian binomial [n; k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k}),
    /// for 0 <= k <= n <= max_order.
    pub fn gauss_binomial(&self, n: u32, k: u32) -> Result<Rational> {
        if k > n {
            return Err(Error::IndexOutOfRange {
                index: k as i64,
                max: n as i64,
            });
        }
        let top = self.q_factorial(n)?;
        let lo = self.q_factorial(k)?;
        let hi = self.q_factorial(n - k)?;
        Ok(top / &(lo * hi))
    }
}

impl PartialEq for QContext {
    fn eq(&self, other: &Self) -> bool {
        // the cache is derived data
        self.q == other.q && self.max_order == other.max_order
    }
}

impl Eq for QContext {}

impl fmt::Debug for QContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QContext")
            .field("q", &self.q)
            .field("max_order", &self.max_order)
            .finish()
    }
}
