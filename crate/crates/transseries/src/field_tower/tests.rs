use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::lazy_series::Relation;
use crate::test_support::{exp_tower, lambert_identity, lambert_tower, names, q, x_tower};

fn s(k: i64) -> ExponentScalar {
    ExponentScalar::int(k)
}

/// Raw coefficients of an expansion up to `count` terms.
fn coefficients(t: &Tower, e: &Element, m: usize, count: usize) -> Vec<(ExponentScalar, Element)> {
    t.expand(e, m).unwrap().raw_terms().take(count).map(|r| r.map(|t| (t.exponent, t.coeff)).unwrap()).collect()
}

#[test]
fn syntactic_cancellation() {
    let t = x_tower();
    let x = t.basis_element(1);
    let e = x.mul(&x).sub(&x.mul(&x));
    assert!(e.is_zero());
    assert!(t.zero_test(&e).unwrap());
}

#[test]
fn fraction_cancellation() {
    let t = x_tower();
    let a = t.one().sub(&t.expansion_variable(1));
    let e = a.mul(&t.inv(&a).unwrap()).sub(&t.one());
    assert!(t.zero_test(&e).unwrap());
    assert!(!t.zero_test(&a).unwrap());
}

#[test]
fn derivation_of_basis_elements() {
    let t = exp_tower();
    let n = names(&t);
    assert_eq!(t.derive(&n.x), n.x);
    let e2 = n.emx.mul(&n.emx);
    assert_eq!(t.derive(&e2), n.x.mul(&e2).scale(&q(-2, 1)));
    assert_eq!(t.derive(&t.int(7)), t.zero());
    assert_eq!(t.lambda(2), &n.x);
}

#[test]
fn derive_at_rescales() {
    let t = exp_tower();
    let n = names(&t);
    // d_2 e^{-x} = -e^{-x}
    assert_eq!(t.derive_at(&n.emx, 2), n.emx.neg());
    // d_2 x = 1
    assert_eq!(t.derive_at(&n.x, 2), t.one());
}

#[test]
fn lower_level_elements_expand_as_constants() {
    let t = exp_tower();
    let n = names(&t);
    let e = n.xinv.mul(&n.emx).mul(&n.emx);
    let cs = coefficients(&t, &e, 2, 5);
    assert_eq!(cs, vec![(s(2), n.xinv.clone())]);
    assert_eq!(t.level(&e), 2);
    assert_eq!(t.level(&n.xinv), 1);
    assert!(t.expand(&e, 1).is_err());
}

#[test]
fn geometric_series_brute_force() {
    let t = x_tower();
    let z = t.expansion_variable(1);
    let e = t.inv(&t.one().sub(&z)).unwrap();
    let cs = coefficients(&t, &e, 1, 10);
    for (k, (exp, c)) in cs.iter().enumerate() {
        assert_eq!(*exp, s(k as i64));
        assert_eq!(c.as_constant(), Some(BigRational::one()));
    }
}

#[test]
fn infinite_cancellation_in_coefficients() {
    let t = exp_tower();
    let n = names(&t);
    let z1 = &n.xinv;
    let z2 = &n.emx;
    let a = t.inv(&n.one.sub(z1).sub(z2)).unwrap();
    let b = t.inv(&n.one.sub(z1)).unwrap();
    let diff = t.expand(&a, 2).unwrap().sub(&t.expand(&b, 2).unwrap());
    let cs: Vec<_> = diff.raw_terms().take(4).map(Result::unwrap).collect();
    assert_eq!(cs[0].exponent, s(0));
    assert!(t.zero_test(&cs[0].coeff).unwrap());
    let first = cs.iter().find(|c| !t.zero_test(&c.coeff).unwrap()).unwrap();
    assert_eq!(first.exponent, s(1));
    assert!(t.equal(&first.coeff, &b.mul(&b)).unwrap());
    assert_eq!(t.valuation_at(&a.sub(&b), 2).unwrap(), Some(s(1)));
}

#[test]
fn dominant_terms_and_signs() {
    let t = exp_tower();
    let n = names(&t);
    let e = n.x.mul(&n.emx).scale(&q(-3, 1)).add(&n.emx.mul(&n.emx));
    let (v, c) = t.dominant(&e).unwrap().unwrap();
    assert_eq!(v, ExponentVector::from_ints(&[-1, 1]));
    assert_eq!(c, q(-3, 1));
    assert_eq!(t.sign(&e).unwrap(), std::cmp::Ordering::Less);
    assert_eq!(t.dominant(&t.zero()).unwrap(), None);
    assert!(t.cmp_asymptotic(&n.emx, &n.xinv, Relation::Prec).unwrap());
    assert!(t.cmp_asymptotic(&n.x, &n.x.add(&t.one()), Relation::Sim).unwrap());
    assert!(!t.cmp_asymptotic(&n.x, &n.xinv, Relation::Prec).unwrap());
}

#[test]
fn bounded_joint_search() {
    let t = exp_tower();
    let n = names(&t);
    let e = n.xinv.mul(&n.emx);
    let at = ExponentVector::from_ints(&[1, 1]);
    assert_eq!(t.joint_valuation_below(&e, &at).unwrap(), Some((at.clone(), BigRational::one())));
    assert_eq!(t.joint_valuation_below(&e, &ExponentVector::from_ints(&[0, 1])).unwrap(), None);
    assert_eq!(t.joint_valuation_below(&e, &ExponentVector::from_ints(&[5, 0])).unwrap(), None);
}

#[test]
fn decomposition_into_large_constant_small() {
    let t = exp_tower();
    let n = names(&t);
    let e = n.ex.add(&n.x).add(&t.int(3)).add(&n.xinv);
    let (large, k, small) = t.canonical_decompose(&e).unwrap();
    assert_eq!(large, n.ex.add(&n.x));
    assert_eq!(k, q(3, 1));
    assert!(t.equal(&small, &n.xinv).unwrap());
}

#[test]
fn pretty_and_raw_rendering() {
    let t = exp_tower();
    let n = names(&t);
    let e = n.x.mul(&n.emx).mul(&n.emx);
    assert_eq!(t.render(&e, RenderMode::Pretty), "x*exp(-2*x)");
    assert_eq!(t.render(&n.xinv, RenderMode::Pretty), "x^-1");
    assert_eq!(t.render(&e, RenderMode::Raw), "b^(1,-2)");
    let half = t.basis_power(1, ExponentScalar::ratio(1, 2));
    assert_eq!(t.render(&half, RenderMode::Pretty), "x^(1/2)");
    let series = t.expand(&t.inv(&n.one.sub(&n.emx)).unwrap(), 2).unwrap();
    let out = t.render_series(&series, 2, &s(3), RenderMode::Pretty).unwrap();
    assert_eq!(out, "1 + exp(-x) + exp(-2*x) + O(exp(-3*x))");
    let zero = t.expand(&t.zero(), 2).unwrap();
    assert_eq!(t.render_series(&zero, 2, &s(3), RenderMode::Pretty).unwrap(), "0");
}

#[test]
fn generator_elements_zero_test() {
    let (t, u, v) = lambert_tower();
    let vv = t.gen_var(v, 0);
    assert!(t.zero_test(&vv.sub(&vv)).unwrap());
    assert!(t.zero_test(&lambert_identity(&t, u, v)).unwrap());
    let e5 = names(&t).emx.pow(5).unwrap();
    assert!(!t.zero_test(&vv.add(&e5)).unwrap());
    assert!(!t.zero_test(&t.gen_var(u, 0)).unwrap());
}

fn base_element(t: &Tower) -> impl Strategy<Value = Element> {
    let t = t.clone();
    prop::collection::vec((-3i64..=3, -2i64..=2, -2i64..=2), 1..4).prop_map(move |terms| {
        let mut acc = t.zero();
        for (c, a, b) in terms {
            let m = Mono::new(ExponentVector::from_ints(&[a, b]), GenMono::one());
            acc = acc.add(&Element::mono(BigRational::from_integer(c.into()), m));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leibniz_rule(e in base_element(&exp_tower()), g in base_element(&exp_tower())) {
        let t = exp_tower();
        let lhs = t.derive(&e.mul(&g));
        let rhs = t.derive(&e).mul(&g).add(&e.mul(&t.derive(&g)));
        prop_assert!(t.equal(&lhs, &rhs).unwrap());
        let lvl = t.level(&lhs).max(1);
        let a = t.expand(&lhs, lvl).unwrap().raw_terms_below(&s(8)).unwrap();
        let b = t.expand(&rhs, lvl).unwrap().raw_terms_below(&s(8)).unwrap();
        let a = a.into_iter().filter(|x| !t.zero_test(&x.coeff).unwrap()).collect::<Vec<_>>();
        let b = b.into_iter().filter(|x| !t.zero_test(&x.coeff).unwrap()).collect::<Vec<_>>();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.exponent, &y.exponent);
            prop_assert!(t.equal(&x.coeff, &y.coeff).unwrap());
        }
    }

    #[test]
    fn base_zero_test_agrees_with_expansion(e in base_element(&exp_tower()), f in base_element(&exp_tower())) {
        let t = exp_tower();
        let e = Element::from_poly(2, e.num().clone());
        let f = Element::from_poly(2, f.num().clone());
        let d = e.sub(&f);
        let zero = t.zero_test(&d).unwrap();
        let lvl = t.level(&d).max(1);
        let all_zero = t
            .expand(&d, lvl)
            .unwrap()
            .raw_terms()
            .take(10)
            .all(|term| t.zero_test(&term.unwrap().coeff).unwrap());
        prop_assert_eq!(zero, all_zero);
    }

    #[test]
    fn small_derivatives_stay_small(a in 1i64..4, b in -2i64..3) {
        let t = exp_tower();
        let e = t.monomial(&ExponentVector::from_ints(&[b, a]));
        let mut d = e.clone();
        for r in 0..3 {
            for k in 1..=3 {
                let p = d.pow(k).unwrap();
                prop_assert!(t.cmp_asymptotic(&p, &t.one(), Relation::Prec).unwrap(), "r = {r}, k = {k}");
            }
            d = t.derive_at(&d, 2);
        }
    }

    #[test]
    fn exact_division_recovers_factors(a in base_element(&exp_tower()), b in base_element(&exp_tower())) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (a, b) = (a.num(), b.num());
        prop_assert_eq!(a.mul(b).exact_div(b), Some(a.clone()));
        if let Some(q) = a.add(&Poly::constant(2, BigRational::one())).exact_div(b) {
            prop_assert_eq!(q.mul(b), a.add(&Poly::constant(2, BigRational::one())));
        }
    }

    #[test]
    fn derivative_preserves_dominance(a in -2i64..3, b in 1i64..3, c in -2i64..3) {
        let t = exp_tower();
        let small = t.monomial(&ExponentVector::from_ints(&[a, b]));
        let big = t.monomial(&ExponentVector::from_ints(&[c, 0]));
        prop_assume!(c != 0);
        prop_assert!(t.cmp_asymptotic(&t.derive(&small), &t.derive(&big), Relation::Prec).unwrap());
    }
}

#[test]
fn log_derivatives_increase() {
    let t = exp_tower();
    assert!(t.cmp_asymptotic(t.lambda(1), t.lambda(2), Relation::Prec).unwrap());
}
