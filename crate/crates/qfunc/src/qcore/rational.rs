//! Exact rational numbers, the coefficient domain for every series.
//!
//! A thin wrapper around `num_rational::BigRational` that pins the
//! invariants and the canonical text form used across the crate:
//! always reduced, denominator >= 1, rendered as `p` when the
//! denominator is 1 and `p/q` otherwise.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational with gcd-reduced numerator/denominator.
///
/// All arithmetic is exact; there is no rounding anywhere in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Build `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Integer power, with negative exponents allowed for nonzero base.
    /// Panics on `0^negative`.
    pub fn pow_i(&self, exp: i64) -> Self {
        if exp == 0 {
            return Rational::one();
        }
        if self.is_zero() {
            assert!(exp > 0, "zero base with negative exponent");
            return Rational::zero();
        }
        let mag = exp.unsigned_abs() as usize;
        let num = num_traits::pow(self.0.numer().clone(), mag);
        let den = num_traits::pow(self.0.denom().clone(), mag);
        if exp > 0 {
            Rational(BigRational::new(num, den))
        } else {
            Rational(BigRational::new(den, num))
        }
    }

    /// Parse the canonical text form: optional sign, decimal integer,
    /// optional `/` and positive decimal integer.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(text.to_string());
        let s = text.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num = BigInt::from_str(num_str).map_err(|_| bad())?;
        let den = match den_str {
            Some(d) => {
                // denominator must be an unsigned positive integer
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = BigInt::from_str(d).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                den
            }
            None => BigInt::one(),
        };
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rational::parse(s)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_automatic() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(-3, -6), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6), Rational::new(-1, 2));
        assert_eq!(Rational::new(0, 7), Rational::zero());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(Rational::new(3, 1).to_string(), "3");
        assert_eq!(Rational::new(-3, 2).to_string(), "-3/2");
        assert_eq!(Rational::new(4, 6).to_string(), "2/3");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn parse_accepts_canonical_forms() {
        assert_eq!(Rational::parse("3").unwrap(), Rational::from_integer(3));
        assert_eq!(Rational::parse("-3/2").unwrap(), Rational::new(-3, 2));
        assert_eq!(Rational::parse("+4/6").unwrap(), Rational::new(2, 3));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("1/-2").is_err());
        assert!(Rational::parse("a").is_err());
        assert!(Rational::parse("").is_err());
        assert!(Rational::parse("1/").is_err());
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["0", "1", "-1", "7/3", "-21/64", "100000000000000000000/7"] {
            let r = Rational::parse(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn integer_powers() {
        let q = Rational::new(1, 2);
        assert_eq!(q.pow_i(0), Rational::one());
        assert_eq!(q.pow_i(3), Rational::new(1, 8));
        assert_eq!(q.pow_i(-1), Rational::from_integer(2));
        assert_eq!(Rational::new(-2, 3).pow_i(2), Rational::new(4, 9));
        assert_eq!(Rational::new(-2, 3).pow_i(-2), Rational::new(9, 4));
        assert_eq!(Rational::zero().pow_i(5), Rational::zero());
    }

    #[test]
    fn exact_arithmetic() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(&a + &b, Rational::new(5, 6));
        assert_eq!(&a - &b, Rational::new(1, 6));
        assert_eq!(&a * &b, Rational::new(1, 6));
        assert_eq!(&a / &b, Rational::new(3, 2));
        assert_eq!(-&a, Rational::new(-1, 2));
    }
}
