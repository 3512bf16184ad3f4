//! Canonical JSON form of a series.
//!
//! Schema: `{"q": "1/2", "vars": ["a","b"], "exact_to": 4,
//! "terms": [{"exp": [1,0], "coef": "3/2"}, ...]}` with terms sorted
//! lexicographically by `exp` and zero coefficients omitted. Emission
//! is canonical, so equal series produce identical bytes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{QContext, Rational};
use crate::series::{ExponentVector, MultiSeries};

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    q: String,
    vars: Vec<String>,
    exact_to: u32,
    terms: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    exp: Vec<u32>,
    coef: String,
}

/// Canonical JSON bytes for a series (with a trailing newline).
pub fn to_json(series: &MultiSeries) -> String {
    let dto = SeriesDto {
        q: series.ctx().q().to_string(),
        vars: series.vars().to_vec(),
        exact_to: series.exact_to(),
        terms: series
            .terms()
            .map(|(e, c)| TermDto {
                exp: e.entries().to_vec(),
                coef: c.to_string(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string(&dto).expect("series serialization cannot fail");
    text.push('\n');
    text
}

/// Parse the canonical JSON form, building a context with the given
/// `max_order` (the file itself carries only q).
pub fn from_json(text: &str, max_order: u32) -> Result<MultiSeries> {
    let dto: SeriesDto =
        serde_json::from_str(text).map_err(|e| Error::InvalidSeries(e.to_string()))?;
    let q = Rational::parse(&dto.q)?;
    let ctx = Arc::new(QContext::new(q, max_order)?);
    let terms: Vec<(ExponentVector, Rational)> = dto
        .terms
        .into_iter()
        .map(|t| Ok((ExponentVector::new(t.exp), Rational::parse(&t.coef)?)))
        .collect::<Result<_>>()?;
    MultiSeries::new(&ctx, dto.vars, dto.exact_to, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let ctx = Arc::new(QContext::new(Rational::new(2, 3), 8).unwrap());
        let f = MultiSeries::random(&ctx, 5, ["a", "b", "c"], 4, 9).unwrap();
        let text = to_json(&f);
        let g = from_json(&text, 8).unwrap();
        assert_eq!(f, g);
        assert_eq!(to_json(&g), text);
    }

    #[test]
    fn parse_is_canonicalizing() {
        // unsorted duplicate terms collapse to canonical form
        let text = r#"{"q":"1/2","vars":["a","b"],"exact_to":3,
            "terms":[{"exp":[1,0],"coef":"2"},{"exp":[0,1],"coef":"1/2"},
                     {"exp":[1,0],"coef":"-2"}]}"#;
        let f = from_json(text, 8).unwrap();
        assert_eq!(f.to_string(), "1/2*b");
        assert_eq!(
            to_json(&f),
            "{\"q\":\"1/2\",\"vars\":[\"a\",\"b\"],\"exact_to\":3,\"terms\":[{\"exp\":[0,1],\"coef\":\"1/2\"}]}\n"
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(from_json("{", 8), Err(Error::InvalidSeries(_))));
        assert!(from_json(r#"{"q":"1","vars":["a"],"exact_to":0,"terms":[]}"#, 8).is_err());
        let bad_dim = r#"{"q":"1/2","vars":["a"],"exact_to":2,"terms":[{"exp":[1,1],"coef":"1"}]}"#;
        assert!(matches!(
            from_json(bad_dim, 8),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_series_round_trip() {
        let ctx = Arc::new(QContext::new(Rational::new(1, 2), 4).unwrap());
        let z = MultiSeries::zero(&ctx, ["a"], 2).unwrap();
        let text = to_json(&z);
        assert_eq!(from_json(&text, 4).unwrap(), z);
    }
}
