//! Inline polynomial syntax for hand-written inputs.
//!
//! A series can be given as a sum of terms like `a^2 - 3/2*a*b + b^2`:
//! rational coefficients, `*`-separated factors, nonnegative integer
//! exponents. Variables are collected and sorted alphabetically. A
//! polynomial written out in full is exact at every representable
//! degree, so the exactness bound defaults to the context's max_order;
//! pass an explicit bound to model truncated data instead.

use std::collections::BTreeMap;
use std::sync::Arc;

use qfunc::{Error, ExponentVector, MultiSeries, QContext, Rational, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Int(String),
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '/' => {
                // only valid directly inside a rational literal; join
                // with the preceding integer
                chars.next();
                let denom = take_digits(&mut chars);
                if denom.is_empty() {
                    return Err(Error::InvalidSeries(
                        "expected digits after '/'".to_string(),
                    ));
                }
                match toks.pop() {
                    Some(Tok::Int(n)) => toks.push(Tok::Int(format!("{n}/{denom}"))),
                    _ => {
                        return Err(Error::InvalidSeries(
                            "'/' must follow an integer coefficient".to_string(),
                        ))
                    }
                }
            }
            c if c.is_ascii_digit() => {
                toks.push(Tok::Int(take_digits(&mut chars)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(name));
            }
            other => {
                return Err(Error::InvalidSeries(format!(
                    "unexpected character {other:?}"
                )))
            }
        }
    }
    Ok(toks)
}

fn take_digits(chars: &mut std::iter::Peekable<std::str::Chars>) -> String {
    let mut s = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_digit() {
            s.push(c);
            chars.next();
        } else {
            break;
        }
    }
    s
}

struct RawTerm {
    coef: Rational,
    exponents: BTreeMap<String, u32>,
}

fn parse_terms(toks: &[Tok]) -> Result<Vec<RawTerm>> {
    let mut terms = Vec::new();
    let mut pos = 0usize;
    let mut sign = Rational::one();
    // optional leading sign
    match toks.first() {
        Some(Tok::Plus) => pos = 1,
        Some(Tok::Minus) => {
            sign = Rational::from_integer(-1);
            pos = 1;
        }
        _ => {}
    }
    if pos >= toks.len() {
        return Err(Error::InvalidSeries("empty expression".to_string()));
    }
    loop {
        let (term, next) = parse_term(toks, pos, sign)?;
        terms.push(term);
        pos = next;
        match toks.get(pos) {
            None => break,
            Some(Tok::Plus) => {
                sign = Rational::one();
                pos += 1;
            }
            Some(Tok::Minus) => {
                sign = Rational::from_integer(-1);
                pos += 1;
            }
            Some(tok) => {
                return Err(Error::InvalidSeries(format!(
                    "expected '+' or '-' between terms, found {tok:?}"
                )))
            }
        }
    }
    Ok(terms)
}

fn parse_term(toks: &[Tok], mut pos: usize, sign: Rational) -> Result<(RawTerm, usize)> {
    let mut coef = sign;
    let mut exponents: BTreeMap<String, u32> = BTreeMap::new();
    loop {
        match toks.get(pos) {
            Some(Tok::Int(lit)) => {
                coef = coef * Rational::parse(lit)?;
                pos += 1;
            }
            Some(Tok::Ident(name)) => {
                pos += 1;
                let mut power = 1u32;
                if let Some(Tok::Caret) = toks.get(pos) {
                    pos += 1;
                    match toks.get(pos) {
                        Some(Tok::Int(lit)) if !lit.contains('/') => {
                            power = lit.parse::<u32>().map_err(|_| {
                                Error::InvalidSeries(format!("bad exponent {lit:?}"))
                            })?;
                            pos += 1;
                        }
                        _ => {
                            return Err(Error::InvalidSeries(
                                "expected a nonnegative integer exponent after '^'".to_string(),
                            ))
                        }
                    }
                }
                *exponents.entry(name.clone()).or_insert(0) += power;
            }
            other => {
                return Err(Error::InvalidSeries(format!(
                    "expected a coefficient or variable, found {other:?}"
                )))
            }
        }
        if let Some(Tok::Star) = toks.get(pos) {
            pos += 1;
            continue;
        }
        break;
    }
    Ok((RawTerm { coef, exponents }, pos))
}

/// Parse the inline form into a series over `ctx`. The exactness bound
/// is `exact_to` when given, otherwise `ctx.max_order()` (a written-out
/// polynomial is exact everywhere).
pub fn parse_inline(text: &str, ctx: &Arc<QContext>, exact_to: Option<u32>) -> Result<MultiSeries> {
    let toks = tokenize(text)?;
    let raw = parse_terms(&toks)?;
    let mut vars: Vec<String> = raw
        .iter()
        .flat_map(|t| t.exponents.keys().cloned())
        .collect();
    vars.sort();
    vars.dedup();
    let exact_to = exact_to.unwrap_or_else(|| ctx.max_order());
    let terms: Vec<(ExponentVector, Rational)> = raw
        .into_iter()
        .map(|t| {
            let entries = vars
                .iter()
                .map(|v| t.exponents.get(v).copied().unwrap_or(0))
                .collect();
            (ExponentVector::new(entries), t.coef)
        })
        .collect();
    MultiSeries::new(ctx, vars, exact_to, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<QContext> {
        Arc::new(QContext::new(Rational::new(1, 2), 16).unwrap())
    }

    #[test]
    fn parses_simple_polynomials() {
        let c = ctx();
        let f = parse_inline("a^2 - 3/2*a*b + b^2", &c, None).unwrap();
        assert_eq!(f.to_string(), "b^2 - 3/2*a*b + a^2");
        assert_eq!(f.exact_to(), 16);
        assert_eq!(f.vars(), ["a", "b"]);

        let g = parse_inline("c + b - a*b", &c, None).unwrap();
        assert_eq!(g.vars(), ["a", "b", "c"]);
        assert_eq!(g.to_string(), "c + b - a*b");
    }

    #[test]
    fn constants_and_zero() {
        let c = ctx();
        assert_eq!(parse_inline("1", &c, None).unwrap().to_string(), "1");
        assert_eq!(parse_inline("-7/3", &c, None).unwrap().to_string(), "-7/3");
        assert!(parse_inline("0", &c, None).unwrap().is_zero());
    }

    #[test]
    fn repeated_variables_multiply_out() {
        let c = ctx();
        let f = parse_inline("2*a*a^2", &c, None).unwrap();
        assert_eq!(f.to_string(), "2*a^3");
        // like terms collapse
        let g = parse_inline("a + a - 2*a", &c, None).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn explicit_exactness_override() {
        let c = ctx();
        let f = parse_inline("a", &c, Some(6)).unwrap();
        assert_eq!(f.exact_to(), 6);
        // bound below the actual degree is an input error
        assert!(parse_inline("a^3", &c, Some(2)).is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        let c = ctx();
        for bad in ["", "a +", "a ^ b", "3//2", "a^-1", "a b", "(a)", "/2", "a*"] {
            assert!(parse_inline(bad, &c, None).is_err(), "accepted {bad:?}");
        }
    }
}
