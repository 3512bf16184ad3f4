//! q-difference operators and the series-valued operator expansions.
//!
//! The primitive operators act "with respect to" one designated
//! variable, treating all others as inert parameters:
//!
//!   D_q{f}(x)     = (f(x) - f(qx)) / x          (Jackson q-derivative)
//!   eta_inv{f}(x) = f(x/q)
//!   theta         = eta_inv . D_q, i.e. theta{f}(x) = (f(x/q) - f(x)) / (x/q)
//!
//! On a monomial x^k, D_q multiplies by (1 - q^k) and lowers k by one;
//! theta multiplies by (q^{1-k} - q) and lowers k by one. Both kill
//! constants. The composition order inside theta (D_q first, then the
//! dilation) is fixed here; it is the order under which the coefficient
//! recurrences in [`crate::equations`] reproduce the operator solutions,
//! and the dual-route tests pin it down.
//!
//! The expansions are weighted sums `sum_n w_n * b^n * Op^n{f}` in a
//! fresh variable b, truncated at n = exact_to: the n-th term carries
//! b^n, so everything beyond lies above the truncation bound and the
//! infinite sum is exactly finite. Weight schedules:
//!
//!   T(b D_q), T(+-b theta):  w_n = (+-1)^n / (q;q)_n
//!   E(b D_q), E(b theta):    w_n = q^{n(n-1)/2} / (q;q)_n
//!   T(a,b; D_q):             w_n = (a;q)_n / (q;q)_n        (a a variable)
//!   T(-1/a, ab; theta):      w_n = prod_{k<n}(a + q^k) / (q;q)_n
//!
//! The last is the cleared polynomial form of (-1/a;q)_n (ab)^n: the
//! 1/a poles cancel against a^n, which keeps the whole kernel inside
//! nonnegative-exponent series.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{QContext, Rational};
use crate::series::{ExponentVector, MultiSeries};

/// The operator expansions exposed by [`apply_exp_operator`],
/// [`apply_cauchy_dq`] and [`apply_cauchy_theta`].
///
/// `TBThetaPlus` and `TBThetaMinus` differ only in the sign attached to
/// the expansion variable; both exist so the sign for the sixth
/// functional equation can be adjudicated against the recurrence oracle
/// instead of assumed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum OperatorId {
    TBDq,
    EBTheta,
    EBDq,
    TBThetaPlus,
    TBThetaMinus,
    CauchyDq,
    CauchyTheta,
}

impl OperatorId {
    pub const ALL: [OperatorId; 7] = [
        OperatorId::TBDq,
        OperatorId::EBTheta,
        OperatorId::EBDq,
        OperatorId::TBThetaPlus,
        OperatorId::TBThetaMinus,
        OperatorId::CauchyDq,
        OperatorId::CauchyTheta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OperatorId::TBDq => "T_bDq",
            OperatorId::EBTheta => "E_btheta",
            OperatorId::EBDq => "E_bDq",
            OperatorId::TBThetaPlus => "T_btheta_plus",
            OperatorId::TBThetaMinus => "T_btheta_minus",
            OperatorId::CauchyDq => "Cauchy_Dq",
            OperatorId::CauchyTheta => "Cauchy_theta",
        }
    }

    pub fn is_cauchy(&self) -> bool {
        matches!(self, OperatorId::CauchyDq | OperatorId::CauchyTheta)
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorId::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Jackson q-derivative with respect to `var`: the coefficient at
/// var-exponent k moves to k-1 with multiplier (1 - q^k); the k = 0
/// part vanishes. `exact_to` decreases by one.
pub fn dq(f: &MultiSeries, var: &str) -> Result<MultiSeries> {
    monomial_map(f, var, |ctx, k| Rational::one() - ctx.q_pow(k as i64))
}

/// The substitution var -> var/q; same as `dilate(var, -1)`.
pub fn eta_inv(f: &MultiSeries, var: &str) -> Result<MultiSeries> {
    f.dilate(var, -1)
}

/// theta = eta_inv . D_q with respect to `var`: var-exponent k moves to
/// k-1 with multiplier (1 - q^k) q^{-(k-1)} = q^{1-k} - q. `exact_to`
/// decreases by one.
pub fn theta(f: &MultiSeries, var: &str) -> Result<MultiSeries> {
    monomial_map(f, var, |ctx, k| ctx.q_pow(1 - k as i64) - ctx.q_pow(1))
}

/// Shared degree-lowering monomial action for dq and theta.
fn monomial_map(
    f: &MultiSeries,
    var: &str,
    multiplier: impl Fn(&QContext, u32) -> Rational,
) -> Result<MultiSeries> {
    let idx = f.var_index(var)?;
    if f.exact_to() == 0 {
        return Err(Error::ExactnessExhausted);
    }
    let ctx = f.ctx();
    let terms: Vec<(ExponentVector, Rational)> = f
        .terms()
        .filter(|(e, _)| e.get(idx) >= 1)
        .map(|(e, c)| {
            let k = e.get(idx);
            let mut shifted = e.entries().to_vec();
            shifted[idx] = k - 1;
            (ExponentVector::new(shifted), c * &multiplier(ctx, k))
        })
        .collect();
    MultiSeries::new(ctx, f.vars().to_vec(), f.exact_to() - 1, terms)
}

/// (g;q)_n = prod_{k=0}^{n-1} (1 - q^k g) with a series argument; the
/// empty product is the constant 1. The result's exactness follows the
/// product rules, i.e. it is `g.exact_to()`.
pub fn pochhammer_series(g: &MultiSeries, n: u32) -> Result<MultiSeries> {
    let ctx = g.ctx();
    let mut acc = MultiSeries::constant(ctx, g.vars().to_vec(), g.exact_to(), Rational::one())?;
    for k in 0..n {
        let factor = MultiSeries::constant(ctx, g.vars().to_vec(), g.exact_to(), Rational::one())?
            .sub(&g.scale(&ctx.q_pow(k as i64)))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Apply one of the plain q-exponential operators to `f` term by term
/// with respect to `src_var`, expanding in the fresh variable `b_var`:
/// `sum_{n=0}^{exact_to} w_n * b^n * Op^n{f}`.
///
/// The output is declared over `f.vars + [b_var]` with the same
/// `exact_to` as the input: each application of the inner operator
/// costs one degree of exactness and the attached b^n restores it.
pub fn apply_exp_operator(
    op: OperatorId,
    f: &MultiSeries,
    src_var: &str,
    b_var: &str,
) -> Result<MultiSeries> {
    let inner = match op {
        OperatorId::TBDq | OperatorId::EBDq => dq,
        OperatorId::EBTheta | OperatorId::TBThetaPlus | OperatorId::TBThetaMinus => theta,
        OperatorId::CauchyDq | OperatorId::CauchyTheta => {
            return Err(Error::OperatorMismatch(format!(
                "{op} takes variable roles; use the cauchy application"
            )))
        }
    };
    f.var_index(src_var)?;
    let setup = ExpansionSetup::new(f, b_var)?;
    let ctx = f.ctx();
    let mut acc = MultiSeries::zero(ctx, setup.out_vars.clone(), f.exact_to())?;
    let mut cur = f.clone();
    for n in 0..=f.exact_to() {
        let numerator = match op {
            OperatorId::TBDq | OperatorId::TBThetaPlus => Rational::one(),
            OperatorId::TBThetaMinus => {
                if n % 2 == 0 {
                    Rational::one()
                } else {
                    Rational::from_integer(-1)
                }
            }
            OperatorId::EBTheta | OperatorId::EBDq => ctx.q_pow((n as i64) * (n as i64 - 1) / 2),
            _ => unreachable!(),
        };
        let weight = numerator / ctx.q_factorial(n)?;
        let term = cur
            .extend_vars(setup.out_vars.clone())?
            .mul_by_monomial(&setup.b_power(n))?
            .scale(&weight);
        acc = acc.add(&term)?;
        if n < f.exact_to() {
            cur = inner(&cur, src_var)?;
        }
    }
    Ok(acc)
}

/// The first Cauchy operator expansion: `sum_n (a;q)_n / (q;q)_n * b^n *
/// D_q^n{f}` with D_q taken with respect to `c_var` and (a;q)_n the
/// genuine polynomial in the variable `a_var`.
pub fn apply_cauchy_dq(
    f: &MultiSeries,
    a_var: &str,
    b_var: &str,
    c_var: &str,
) -> Result<MultiSeries> {
    cauchy_expansion(f, a_var, b_var, c_var, CauchyKind::Dq)
}

/// The second Cauchy operator expansion in its cleared polynomial form:
/// `sum_n prod_{k<n}(a + q^k) / (q;q)_n * b^n * theta^n{f}` with theta
/// taken with respect to `c_var`.
pub fn apply_cauchy_theta(
    f: &MultiSeries,
    a_var: &str,
    b_var: &str,
    c_var: &str,
) -> Result<MultiSeries> {
    cauchy_expansion(f, a_var, b_var, c_var, CauchyKind::Theta)
}

enum CauchyKind {
    Dq,
    Theta,
}

fn cauchy_expansion(
    f: &MultiSeries,
    a_var: &str,
    b_var: &str,
    c_var: &str,
    kind: CauchyKind,
) -> Result<MultiSeries> {
    f.var_index(a_var)?;
    f.var_index(c_var)?;
    if a_var == c_var {
        return Err(Error::VariableCollision(a_var.to_string()));
    }
    let setup = ExpansionSetup::new(f, b_var)?;
    let ctx = f.ctx();
    let out_vars = setup.out_vars.clone();

    // The prefactor polynomial lives at full precision: it is an exact
    // polynomial of degree n <= exact_to <= max_order.
    let full = ctx.max_order();
    let a_mono = MultiSeries::variable(ctx, out_vars.clone(), full, a_var)?;
    let one = MultiSeries::constant(ctx, out_vars.clone(), full, Rational::one())?;

    let mut acc = MultiSeries::zero(ctx, out_vars.clone(), f.exact_to())?;
    let mut prefactor = one.clone();
    let mut cur = f.clone();
    for n in 0..=f.exact_to() {
        let weight = Rational::one() / ctx.q_factorial(n)?;
        let term = prefactor
            .mul(&cur.extend_vars(out_vars.clone())?)?
            .mul_by_monomial(&setup.b_power(n))?
            .scale(&weight);
        acc = acc.add(&term)?;
        if n < f.exact_to() {
            let qn = ctx.q_pow(n as i64);
            let (next_factor, next_cur) = match kind {
                // (1 - a q^n) and D_q
                CauchyKind::Dq => (one.sub(&a_mono.scale(&qn))?, dq(&cur, c_var)?),
                // (a + q^n) and theta
                CauchyKind::Theta => (a_mono.add(&one.scale(&qn))?, theta(&cur, c_var)?),
            };
            prefactor = prefactor.mul(&next_factor)?;
            cur = next_cur;
        }
    }
    Ok(acc)
}

/// Output variable layout shared by the operator expansions: the input
/// variables with the fresh expansion variable appended.
struct ExpansionSetup {
    out_vars: Vec<String>,
    b_index: usize,
}

impl ExpansionSetup {
    fn new(f: &MultiSeries, b_var: &str) -> Result<Self> {
        if f.vars().iter().any(|v| v == b_var) {
            return Err(Error::VariableCollision(b_var.to_string()));
        }
        let mut out_vars = f.vars().to_vec();
        out_vars.push(b_var.to_string());
        let b_index = out_vars.len() - 1;
        Ok(ExpansionSetup { out_vars, b_index })
    }

    fn b_power(&self, n: u32) -> ExponentVector {
        let mut entries = vec![0u32; self.out_vars.len()];
        entries[self.b_index] = n;
        ExponentVector::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ctx(qn: i64, qd: i64, max_order: u32) -> Arc<QContext> {
        Arc::new(QContext::new(Rational::new(qn, qd), max_order).unwrap())
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ev(entries: &[u32]) -> ExponentVector {
        ExponentVector::new(entries.to_vec())
    }

    fn monomial(c: &Arc<QContext>, vars: &[&str], exact_to: u32, exp: &[u32]) -> MultiSeries {
        MultiSeries::new(c, vars.to_vec(), exact_to, [(ev(exp), rat(1, 1))]).unwrap()
    }

    #[test]
    fn dq_examples() {
        let c = ctx(1, 2, 8);
        let a2 = monomial(&c, &["a"], 4, &[2]);
        // (a^2 - (qa)^2)/a = (1 - q^2) a = 3/4 a at q = 1/2
        assert_eq!(dq(&a2, "a").unwrap().to_string(), "3/4*a");

        let k = MultiSeries::constant(&c, ["a"], 4, rat(5, 3)).unwrap();
        assert!(dq(&k, "a").unwrap().is_zero());

        let cc = monomial(&c, &["c"], 4, &[1]);
        assert_eq!(dq(&cc, "c").unwrap().to_string(), "1/2");

        let exhausted = MultiSeries::constant(&c, ["a"], 0, rat(1, 1)).unwrap();
        assert!(matches!(
            dq(&exhausted, "a"),
            Err(Error::ExactnessExhausted)
        ));
    }

    #[test]
    fn dq_lowers_exactness_by_one() {
        let c = ctx(2, 3, 8);
        let f = MultiSeries::random(&c, 1, ["a", "b"], 5, 9).unwrap();
        assert_eq!(dq(&f, "a").unwrap().exact_to(), 4);
    }

    #[test]
    fn eta_inv_examples() {
        let c = ctx(1, 2, 8);
        let a = monomial(&c, &["a"], 4, &[1]);
        assert_eq!(eta_inv(&a, "a").unwrap().to_string(), "2*a");
        let k = MultiSeries::constant(&c, ["a"], 4, rat(7, 2)).unwrap();
        assert_eq!(eta_inv(&k, "a").unwrap(), k);
        // inverse substitutions cancel
        let f = MultiSeries::random(&c, 9, ["a"], 4, 9).unwrap();
        assert_eq!(eta_inv(&f.dilate("a", 1).unwrap(), "a").unwrap(), f);
    }

    #[test]
    fn theta_examples() {
        let c = ctx(1, 2, 8);
        let a = monomial(&c, &["a"], 4, &[1]);
        // (f(a/q) - f(a))/(a/q) on f = a gives 1 - q
        assert_eq!(theta(&a, "a").unwrap().to_string(), "1/2");

        let k = MultiSeries::constant(&c, ["a"], 4, rat(3, 1)).unwrap();
        assert!(theta(&k, "a").unwrap().is_zero());

        // monomial law at k = 2: q^{-1} - q = 3/2
        let a2 = monomial(&c, &["a"], 4, &[2]);
        assert_eq!(theta(&a2, "a").unwrap().to_string(), "3/2*a");
    }

    #[test]
    fn theta_is_eta_inv_after_dq() {
        let c = ctx(3, 5, 10);
        for seed in 0..10 {
            let f = MultiSeries::random(&c, seed, ["a", "b"], 6, 9).unwrap();
            let composed = eta_inv(&dq(&f, "a").unwrap(), "a").unwrap();
            assert_eq!(theta(&f, "a").unwrap(), composed);
        }
    }

    #[test]
    fn pochhammer_series_examples() {
        let c = ctx(1, 2, 8);
        let a = monomial(&c, &["a"], 6, &[1]);
        assert_eq!(pochhammer_series(&a, 0).unwrap().to_string(), "1");
        assert_eq!(pochhammer_series(&a, 1).unwrap().to_string(), "1 - a");
        // (1 - a)(1 - qa) = 1 - (1+q)a + q a^2
        assert_eq!(
            pochhammer_series(&a, 2).unwrap().to_string(),
            "1 - 3/2*a + 1/2*a^2"
        );
    }

    #[test]
    fn exp_operator_on_square() {
        let c = ctx(1, 2, 8);
        let a2 = monomial(&c, &["a"], 4, &[2]);
        let t = apply_exp_operator(OperatorId::TBDq, &a2, "a", "b").unwrap();
        // a^2 + (1+q) a b + b^2
        assert_eq!(t.to_string(), "b^2 + 3/2*a*b + a^2");
        assert_eq!(t.exact_to(), 4);

        let e = apply_exp_operator(OperatorId::EBDq, &a2, "a", "b").unwrap();
        // a^2 + (1+q) a b + q b^2
        assert_eq!(e.to_string(), "1/2*b^2 + 3/2*a*b + a^2");
    }

    #[test]
    fn exp_operator_e_btheta_on_linear() {
        let c = ctx(1, 2, 8);
        let a = monomial(&c, &["a"], 4, &[1]);
        let out = apply_exp_operator(OperatorId::EBTheta, &a, "a", "b").unwrap();
        assert_eq!(out.to_string(), "b + a");
    }

    #[test]
    fn exp_operator_ignores_untouched_input() {
        let c = ctx(1, 2, 8);
        // f does not involve the source variable: Op^n kills it for n >= 1
        let f = monomial(&c, &["a", "c"], 4, &[0, 2]);
        for op in [
            OperatorId::TBDq,
            OperatorId::EBTheta,
            OperatorId::EBDq,
            OperatorId::TBThetaPlus,
            OperatorId::TBThetaMinus,
        ] {
            let out = apply_exp_operator(op, &f, "a", "b").unwrap();
            assert_eq!(out, f.extend_vars(["a", "c", "b"]).unwrap());
        }
    }

    #[test]
    fn exp_operator_rejects_collision() {
        let c = ctx(1, 2, 8);
        let f = monomial(&c, &["a"], 4, &[1]);
        assert!(matches!(
            apply_exp_operator(OperatorId::TBDq, &f, "a", "a"),
            Err(Error::VariableCollision(_))
        ));
        assert!(matches!(
            apply_exp_operator(OperatorId::CauchyDq, &f, "a", "b"),
            Err(Error::OperatorMismatch(_))
        ));
    }

    #[test]
    fn cauchy_dq_on_plain_c() {
        let c = ctx(1, 2, 8);
        let f = monomial(&c, &["a", "c"], 4, &[0, 1]);
        let out = apply_cauchy_dq(&f, "a", "b", "c").unwrap();
        // c + (1 - a) b over vars [a, c, b]
        assert_eq!(out.coefficient(&ev(&[0, 1, 0])).unwrap(), rat(1, 1));
        assert_eq!(out.coefficient(&ev(&[0, 0, 1])).unwrap(), rat(1, 1));
        assert_eq!(out.coefficient(&ev(&[1, 0, 1])).unwrap(), rat(-1, 1));
        assert_eq!(out.num_terms(), 3);
    }

    #[test]
    fn cauchy_theta_on_plain_c() {
        let c = ctx(1, 2, 8);
        let f = monomial(&c, &["a", "c"], 4, &[0, 1]);
        let out = apply_cauchy_theta(&f, "a", "b", "c").unwrap();
        // c + (1 + a) b
        assert_eq!(out.coefficient(&ev(&[0, 1, 0])).unwrap(), rat(1, 1));
        assert_eq!(out.coefficient(&ev(&[0, 0, 1])).unwrap(), rat(1, 1));
        assert_eq!(out.coefficient(&ev(&[1, 0, 1])).unwrap(), rat(1, 1));
        assert_eq!(out.num_terms(), 3);
    }

    #[test]
    fn cauchy_on_constant_is_identity() {
        let c = ctx(2, 3, 8);
        let f = MultiSeries::constant(&c, ["a", "c"], 4, rat(7, 5)).unwrap();
        let out = apply_cauchy_dq(&f, "a", "b", "c").unwrap();
        assert_eq!(out, f.extend_vars(["a", "c", "b"]).unwrap());
        let out = apply_cauchy_theta(&f, "a", "b", "c").unwrap();
        assert_eq!(out, f.extend_vars(["a", "c", "b"]).unwrap());
    }

    #[test]
    fn cauchy_degenerates_to_exp_operator_at_a_zero() {
        // For input independent of a, setting a = 0 in the output
        // collapses the prefactor polynomials to the plain exponential
        // operator weights.
        let c = ctx(1, 2, 10);
        for seed in 0..5 {
            let f = MultiSeries::random(&c, seed, ["c"], 5, 9)
                .unwrap()
                .extend_vars(["a", "c"])
                .unwrap();
            let cauchy = apply_cauchy_dq(&f, "a", "b", "c").unwrap();
            let plain = apply_exp_operator(OperatorId::TBDq, &f, "c", "b").unwrap();
            assert_eq!(
                cauchy.set_var_zero("a").unwrap(),
                plain.set_var_zero("a").unwrap()
            );

            let cauchy = apply_cauchy_theta(&f, "a", "b", "c").unwrap();
            let plain = apply_exp_operator(OperatorId::EBTheta, &f, "c", "b").unwrap();
            assert_eq!(
                cauchy.set_var_zero("a").unwrap(),
                plain.set_var_zero("a").unwrap()
            );
        }
    }

    #[test]
    fn operator_names_round_trip() {
        for op in OperatorId::ALL {
            assert_eq!(op.name().parse::<OperatorId>().unwrap(), op);
        }
        assert!("T_bdq".parse::<OperatorId>().is_err());
    }
}
