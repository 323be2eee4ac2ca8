use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::order_core::ExponentScalar;
use crate::test_support::{c, exp_tower, lambert_p, names, q, x_tower};

fn s(k: i64) -> ExponentScalar {
    ExponentScalar::int(k)
}

fn catalan(n: u64) -> BigRational {
    let mut c = BigRational::from_integer(1.into());
    for k in 0..n {
        c *= q(2 * (2 * k as i64 + 1), k as i64 + 2);
    }
    c
}

#[test]
fn monomial_bookkeeping() {
    let m = DiffMono::new(vec![2, 0, 1, 0]);
    assert_eq!(m.powers(), &[2, 0, 1]);
    assert_eq!(m.degree(), 3);
    assert_eq!(m.order(), Some(2));
    assert_eq!(m.mul(&DiffMono::var(1)), DiffMono::new(vec![2, 1, 1]));
    assert!(DiffMono::one().is_one());
    assert_eq!(m.to_string(), "(2,0,1)");
}

#[test]
fn partials_and_coefficients() {
    let t = x_tower();
    let f = DiffPolynomial::var(1, 0);
    let df = DiffPolynomial::var(1, 1);
    let p = f.mul(&df).add(&f.mul(&f));
    assert_eq!(p.partial(1), f);
    assert_eq!(p.partial(0), df.add(&f.scale(&t.int(2))));
    assert_eq!(p.degree_in(0), 2);
    let cs = p.coefficients_in(1);
    assert_eq!(cs, vec![f.mul(&f), f.clone()]);
    assert_eq!(p.homogeneous_part(2), p);
    assert!(p.homogeneous_part(1).is_zero());
}

#[test]
fn example_polynomial_is_quasilinear() {
    let t = exp_tower();
    let p = lambert_p(&t);
    let (v, v0, v1) = p.valuation_triple(&t).unwrap();
    assert_eq!(v, ExtendedValuation::Finite(ExponentVector::zeros(2)));
    assert_eq!(v1, v);
    assert_eq!(v0, ExtendedValuation::Finite(ExponentVector::from_ints(&[-1, 2])));
    assert!(p.is_quasilinear(&t, &ExponentVector::zeros(2)).unwrap());
    assert!(p.newton_degree_positive(&t).unwrap());
    assert_eq!(p.level(&t), 2);
    assert_eq!(p.order(), Some(1));
}

#[test]
fn example_solution_expansion() {
    let t = exp_tower();
    let sol = dsolve_quasilinear(&t, &lambert_p(&t)).unwrap();
    assert_eq!(sol.level, 2);
    let out = t.render_series(&sol.series, 2, &s(5), RenderMode::Pretty).unwrap();
    assert_eq!(out, "x*exp(-2*x) + (1/2*x^2 - x)*exp(-3*x) + (1/3*x^3 - 3/2*x^2 + x)*exp(-4*x) + O(exp(-5*x))");
}

#[test]
fn example_solution_residual_is_small() {
    let t = exp_tower();
    let p = lambert_p(&t);
    let sol = dsolve_quasilinear(&t, &p).unwrap();
    let approx = t.truncation(&sol.series, 2, &s(7)).unwrap();
    let residual = p.evaluate(&t, &approx);
    let v = t.valuation_at(&residual, 2).unwrap().unwrap();
    assert!(v >= s(7), "residual valuation {v}");
}

#[test]
fn catalan_generating_function() {
    // f = x^{-1} + f^2
    let t = x_tower();
    let f = DiffPolynomial::var(1, 0);
    let p = f.mul(&f).sub(&f).add(&c(&t.expansion_variable(1)));
    let sol = dsolve_quasilinear(&t, &p).unwrap();
    assert_eq!(sol.level, 1);
    let terms = sol.series.terms_below(&s(9)).unwrap();
    assert_eq!(terms.len(), 8);
    for (k, term) in terms.iter().enumerate() {
        assert_eq!(term.exponent, s(k as i64 + 1));
        assert_eq!(term.coeff.as_constant(), Some(catalan(k as u64)));
    }
}

#[test]
fn non_quasilinear_reports_valuations() {
    let t = x_tower();
    let f = DiffPolynomial::var(1, 0);
    let p = f.mul(&f).sub(&c(&t.expansion_variable(1)));
    match dsolve_quasilinear(&t, &p) {
        Err(Error::NotQuasiLinear(msg)) => assert!(msg.contains("v(P_[1]) = +inf"), "{msg}"),
        other => panic!("expected NotQuasiLinear, got {other:?}"),
    }
}

#[test]
fn trivial_solution() {
    let t = exp_tower();
    let n = names(&t);
    let f = DiffPolynomial::var(2, 0);
    let p = f.add(&f.mul(&DiffPolynomial::var(2, 1)).scale(&n.emx));
    let sol = dsolve_quasilinear(&t, &p).unwrap();
    assert!(sol.trivial);
    let id = adjoin_solution(&t, "Z", &p).unwrap();
    assert!(t.generator(id).is_trivial());
    assert!(t.zero_test(&t.gen_var(id, 0)).unwrap());
    assert!(!t.zero_test(&t.gen_var(id, 0).add(&n.x)).unwrap());
}

#[test]
fn generators_render_by_name() {
    let t = exp_tower();
    let id = adjoin_solution(&t, "U", &lambert_p(&t)).unwrap();
    let e = t.gen_var(id, 0).mul(&t.gen_var(id, 0)).add(&t.gen_var(id, 1));
    assert_eq!(t.render(&e, RenderMode::Pretty), "U^2 + d(U)");
}

#[test]
fn polynomial_rendering() {
    let t = exp_tower();
    let f = DiffPolynomial::var(2, 0);
    let df = DiffPolynomial::var(2, 1);
    let p = f.mul(&f).add(&df.scale(&names(&t).x)).sub(&c(&t.one()));
    assert_eq!(p.render(&t, RenderMode::Pretty), "F^2 + x*d(F) - 1");
}

#[test]
fn linear_equations_as_polynomials() {
    let t = x_tower();
    let l = LinearOperator::new(vec![t.constant(q(1, 2)), t.one()], 1);
    let p = linear_equation(&l, &t, &t.expansion_variable(1)).unwrap();
    let sol = dsolve_quasilinear(&t, &p).unwrap();
    let first = sol.series.terms_below(&s(3)).unwrap();
    assert_eq!(first[0].exponent, s(1));
    assert_eq!(first[0].coeff.as_constant(), Some(q(-2, 1)));
}

fn small_element(t: &Tower) -> impl Strategy<Value = Element> {
    let t = t.clone();
    prop::collection::vec((-2i64..=2, -1i64..=1, 0i64..=2), 1..3).prop_map(move |terms| {
        let mut acc = t.zero();
        for (k, a, b) in terms {
            acc = acc.add(&t.monomial(&ExponentVector::from_ints(&[a, b])).scale(&q(k, 1)));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn conjugations_commute_with_evaluation(phi in small_element(&exp_tower()), g in small_element(&exp_tower())) {
        let t = exp_tower();
        let p = lambert_p(&t);
        let add = p.add_conj(&t, &phi).evaluate(&t, &g);
        prop_assert!(t.equal(&add, &p.evaluate(&t, &phi.add(&g))).unwrap());
        let mul = p.mul_conj(&t, &phi).evaluate(&t, &g);
        prop_assert!(t.equal(&mul, &p.evaluate(&t, &phi.mul(&g))).unwrap());
    }

    #[test]
    fn total_derivative_commutes_with_evaluation(g in small_element(&exp_tower())) {
        let t = exp_tower();
        let p = lambert_p(&t);
        let lhs = p.derive(&t).evaluate(&t, &g);
        let rhs = t.derive(&p.evaluate(&t, &g));
        prop_assert!(t.equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn series_evaluation_matches_closed_form(g in small_element(&exp_tower())) {
        let t = exp_tower();
        let p = lambert_p(&t);
        let lvl = 2;
        let closed = t.expand(&p.evaluate(&t, &g), lvl).unwrap();
        let lazy = p.evaluate_series(&t, &t.expand(&g, lvl).unwrap(), lvl).unwrap();
        let diff = closed.sub(&lazy).raw_terms_below(&s(6)).unwrap();
        for term in diff {
            prop_assert!(t.zero_test(&term.coeff).unwrap());
        }
    }
}
