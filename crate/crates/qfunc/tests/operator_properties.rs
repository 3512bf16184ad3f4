//! Dual-route checks for the q-operators.
//!
//! The monomial-law implementations of D_q and theta are checked
//! against their definitional divided-difference forms built from
//! dilation, subtraction, and exact variable division; the operator
//! expansions are checked for linearity, boundary behaviour at b = 0,
//! closed forms on monomials, and stability of the exact region under
//! recomputation at a larger truncation order.

use std::sync::Arc;

use qfunc::{
    apply_cauchy_dq, apply_cauchy_theta, apply_exp_operator, dq, eta_inv, theta, ExponentVector,
    MultiSeries, OperatorId, QContext, Rational,
};

const Q_CHOICES: [(i64, i64); 4] = [(1, 2), (2, 3), (3, 5), (9, 10)];

fn contexts(max_order: u32) -> Vec<Arc<QContext>> {
    Q_CHOICES
        .iter()
        .map(|&(n, d)| Arc::new(QContext::new(Rational::new(n, d), max_order).unwrap()))
        .collect()
}

/// (f(x) - f(xq)) / x, straight from the definition.
fn dq_definitional(f: &MultiSeries, var: &str) -> MultiSeries {
    f.sub(&f.dilate(var, 1).unwrap())
        .unwrap()
        .divide_by_var(var)
        .unwrap()
}

/// (f(x/q) - f(x)) / (x/q) = q (f(x/q) - f(x)) / x.
fn theta_definitional(f: &MultiSeries, var: &str) -> MultiSeries {
    eta_inv(f, var)
        .unwrap()
        .sub(f)
        .unwrap()
        .divide_by_var(var)
        .unwrap()
        .scale(&f.ctx().q_pow(1))
}

#[test]
fn monomial_laws_match_definitional_forms() {
    for ctx in contexts(10) {
        for seed in 0..20 {
            let f = MultiSeries::random(&ctx, seed, ["a", "c"], 6, 9).unwrap();
            assert_eq!(dq(&f, "a").unwrap(), dq_definitional(&f, "a"));
            assert_eq!(dq(&f, "c").unwrap(), dq_definitional(&f, "c"));
            assert_eq!(theta(&f, "a").unwrap(), theta_definitional(&f, "a"));
            assert_eq!(theta(&f, "c").unwrap(), theta_definitional(&f, "c"));
        }
    }
}

#[test]
fn theta_is_the_composition() {
    for ctx in contexts(10) {
        for seed in 0..20 {
            let f = MultiSeries::random(&ctx, seed, ["a", "c"], 6, 9).unwrap();
            assert_eq!(
                theta(&f, "a").unwrap(),
                eta_inv(&dq(&f, "a").unwrap(), "a").unwrap()
            );
        }
    }
}

#[test]
fn q_leibniz_rule() {
    // D_q(fg) = g D_q(f) + f(qx) D_q(g)
    for ctx in contexts(10) {
        for seed in 0..20 {
            let f = MultiSeries::random(&ctx, 2 * seed, ["a", "c"], 5, 9).unwrap();
            let g = MultiSeries::random(&ctx, 2 * seed + 1, ["a", "c"], 5, 9).unwrap();
            let lhs = dq(&f.mul(&g).unwrap(), "a").unwrap();
            let rhs = g
                .mul(&dq(&f, "a").unwrap())
                .unwrap()
                .add(
                    &f.dilate("a", 1)
                        .unwrap()
                        .mul(&dq(&g, "a").unwrap())
                        .unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

fn apply(op: OperatorId, f: &MultiSeries) -> MultiSeries {
    if op.is_cauchy() {
        match op {
            OperatorId::CauchyDq => apply_cauchy_dq(f, "a", "b", "c").unwrap(),
            _ => apply_cauchy_theta(f, "a", "b", "c").unwrap(),
        }
    } else {
        apply_exp_operator(op, f, "a", "b").unwrap()
    }
}

#[test]
fn operator_applications_are_linear() {
    let alpha = Rational::new(3, 7);
    let beta = Rational::new(-5, 2);
    for ctx in contexts(10) {
        for op in OperatorId::ALL {
            for seed in 0..8 {
                let f = MultiSeries::random(&ctx, 100 + 2 * seed, ["a", "c"], 5, 9).unwrap();
                let g = MultiSeries::random(&ctx, 101 + 2 * seed, ["a", "c"], 5, 9).unwrap();
                let combo = f.scale(&alpha).add(&g.scale(&beta)).unwrap();
                let lhs = apply(op, &combo);
                let rhs = apply(op, &f)
                    .scale(&alpha)
                    .add(&apply(op, &g).scale(&beta))
                    .unwrap();
                assert_eq!(lhs, rhs, "linearity failed for {op}");
            }
        }
    }
}

#[test]
fn setting_b_zero_recovers_input() {
    for ctx in contexts(10) {
        for op in OperatorId::ALL {
            let f = MultiSeries::random(&ctx, 7, ["a", "c"], 5, 9).unwrap();
            let out = apply(op, &f);
            assert_eq!(
                out.set_var_zero("b").unwrap(),
                f.extend_vars(["a", "c", "b"]).unwrap(),
                "b = 0 slice failed for {op}"
            );
        }
    }
}

#[test]
fn exact_region_is_stable_under_larger_truncation() {
    // The same polynomial input recomputed at a larger max_order and
    // exactness budget must reproduce every coefficient inside the
    // original exact region.
    let degree = 5u32;
    for &(qn, qd) in &Q_CHOICES {
        let small = Arc::new(QContext::new(Rational::new(qn, qd), 8).unwrap());
        let large = Arc::new(QContext::new(Rational::new(qn, qd), 14).unwrap());
        for op in OperatorId::ALL {
            let f_small = MultiSeries::random(&small, 13, ["a", "c"], degree, 9).unwrap();
            let f_large = MultiSeries::new(
                &large,
                ["a", "c"],
                degree + 4,
                f_small.terms().map(|(e, c)| (e.clone(), c.clone())),
            )
            .unwrap();
            let out_small = apply(op, &f_small);
            let out_large = apply(op, &f_large);
            assert_eq!(out_small.exact_to(), degree);
            for exp in qfunc::monomials_up_to(3, degree) {
                assert_eq!(
                    out_small.coefficient(&exp).unwrap(),
                    out_large.coefficient(&exp).unwrap(),
                    "coefficient drift for {op} at {exp:?}"
                );
            }
        }
    }
}

#[test]
fn t_bdq_expands_monomials_by_gauss_binomials() {
    // Oracle: iterate the definitional D_q divided difference and
    // assemble sum_n b^n D_q^n{a^k} / (q;q)_n by hand, then compare
    // both against the closed form sum_n [k; n]_q a^{k-n} b^n.
    for ctx in contexts(10) {
        for k in 0u32..=8 {
            let a_k = MultiSeries::new(
                &ctx,
                ["a"],
                k.max(1),
                [(ExponentVector::new(vec![k]), Rational::one())],
            )
            .unwrap();

            let mut oracle_terms = Vec::new();
            let mut cur = a_k.clone();
            for n in 0..=k {
                let weight = Rational::one() / ctx.q_factorial(n).unwrap();
                for (exp, coef) in cur.terms() {
                    oracle_terms.push((ExponentVector::new(vec![exp.get(0), n]), coef * &weight));
                }
                if n < k {
                    cur = dq_definitional(&cur, "a");
                }
            }
            let oracle = MultiSeries::new(&ctx, ["a", "b"], k.max(1), oracle_terms).unwrap();

            let closed_form = MultiSeries::new(
                &ctx,
                ["a", "b"],
                k.max(1),
                (0..=k).map(|n| {
                    (
                        ExponentVector::new(vec![k - n, n]),
                        ctx.gauss_binomial(k, n).unwrap(),
                    )
                }),
            )
            .unwrap();

            let expanded = apply_exp_operator(OperatorId::TBDq, &a_k, "a", "b").unwrap();
            assert_eq!(expanded, oracle, "oracle mismatch at k = {k}");
            assert_eq!(expanded, closed_form, "closed form mismatch at k = {k}");
        }
    }
}

#[test]
fn spot_values_on_a_squared() {
    let ctx = Arc::new(QContext::new(Rational::new(1, 2), 8).unwrap());
    let a2 = MultiSeries::new(
        &ctx,
        ["a"],
        4,
        [(ExponentVector::new(vec![2]), Rational::one())],
    )
    .unwrap();
    // T(b D_q){a^2} = a^2 + (1+q) ab + b^2
    assert_eq!(
        apply_exp_operator(OperatorId::TBDq, &a2, "a", "b")
            .unwrap()
            .to_string(),
        "b^2 + 3/2*a*b + a^2"
    );
    // E(b D_q){a^2} = a^2 + (1+q) ab + q b^2
    assert_eq!(
        apply_exp_operator(OperatorId::EBDq, &a2, "a", "b")
            .unwrap()
            .to_string(),
        "1/2*b^2 + 3/2*a*b + a^2"
    );
}
