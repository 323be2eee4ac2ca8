use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::diffpoly::DiffMono;
use crate::test_support::{c, exp_tower, lambert_identity, lambert_p, lambert_tower, names, omega, q, x_tower};

fn s(k: i64) -> ExponentScalar {
    ExponentScalar::int(k)
}

fn var(t: &Tower, j: usize) -> DiffPolynomial {
    DiffPolynomial::var(t.dim(), j)
}

#[test]
fn leaders_initials_and_separants() {
    let t = x_tower();
    let f = var(&t, 0);
    let df = var(&t, 1);
    let p = f.mul(&df).add(&f.mul(&f));
    assert_eq!(leader(&p), Some(1));
    assert_eq!(rank(&p), RittRank::Rank { leader: 1, degree: 1 });
    assert_eq!(initial(&p).unwrap(), f);
    assert_eq!(separant(&p).unwrap(), f);

    let d2 = var(&t, 2);
    let p = d2.pow(3).add(&f);
    assert_eq!(initial(&p).unwrap(), c(&t.one()));
    assert_eq!(separant(&p).unwrap(), d2.pow(2).scale(&t.int(3)));

    let k = c(&t.int(4));
    assert_eq!(rank(&k), RittRank::Bottom);
    assert!(initial(&k).is_err());
    assert!(RittRank::Bottom < rank(&f));
    assert!(rank(&f) < rank(&f.mul(&f)));
    assert!(rank(&f.mul(&f)) < rank(&df));
}

#[test]
fn derivative_reduces_to_zero() {
    let t = x_tower();
    let f = var(&t, 0);
    let q = f.mul(&f).sub(&c(&t.basis_element(1)));
    let dq = q.derive(&t);
    let r = ritt_reduce(&t, &dq, std::slice::from_ref(&q)).unwrap();
    assert!(r.remainder.is_zero());
    assert_eq!(r.separant_powers, vec![1]);
}

#[test]
fn higher_degree_pseudo_division() {
    let t = x_tower();
    let f = var(&t, 0);
    let q = f.mul(&f).sub(&c(&t.int(2)));
    let p = f.pow(3);
    let r = ritt_reduce(&t, &p, std::slice::from_ref(&q)).unwrap();
    assert_eq!(r.remainder, f.scale(&t.int(2)));
}

#[test]
fn lambert_contexts() {
    let (t, u, v) = lambert_tower();
    let cu = context(&t, u).unwrap();
    assert_eq!(cu.level(), 2);
    assert_eq!(cu.value_valuation(), &s(2));
    let cv = context(&t, v).unwrap();
    assert_eq!(cv.value_valuation(), &s(1));
    assert!(Rc::ptr_eq(&cv, &context(&t, v).unwrap()));
}

#[test]
fn equation_of_v_reduces_by_the_identity() {
    let (t, u, v) = lambert_tower();
    let q = t.as_diff_polynomial(v, lambert_identity(&t, u, v).num());
    let r = ritt_reduce(&t, &omega(&t, u), std::slice::from_ref(&q)).unwrap();
    assert!(r.remainder.is_zero());
}

#[test]
fn lambert_identity_is_certified() {
    let (t, u, v) = lambert_tower();
    let verdict = decide(&t, &lambert_identity(&t, u, v)).unwrap();
    assert!(verdict.zero);
    let cert = verdict.certificate.unwrap();
    assert_eq!(cert.generator, "V");
    assert_eq!(cert.sigma, s(1));
    assert_eq!(cert.bound, s(1));
    assert_eq!(cert.next_exponent, Some(s(2)));
    assert_eq!(cert.to_string(), "sigma = 1, v2(Q(V)) >= 2");
}

#[test]
fn perturbed_identity_is_nonzero() {
    let (t, u, v) = lambert_tower();
    let e5 = names(&t).emx.pow(5).unwrap();
    let verdict = decide(&t, &lambert_identity(&t, u, v).add(&e5)).unwrap();
    assert!(!verdict.zero);
}

#[test]
fn constants_are_nonzero() {
    let (t, u, _) = lambert_tower();
    assert!(!zero_test(&t, u, vec![c(&t.one())]).unwrap());
    let verdict = decide(&t, &t.int(3)).unwrap();
    assert_eq!(verdict, Verdict { zero: false, certificate: None });
}

#[test]
fn defining_equation_vanishes() {
    let t = exp_tower();
    let u = extend(&t, "U", &lambert_p(&t)).unwrap();
    assert!(zero_test(&t, u, vec![lambert_p(&t)]).unwrap());
    assert!(!zero_test(&t, u, vec![var(&t, 0)]).unwrap());
}

#[test]
fn trace_is_indented_by_depth() {
    let (t, u, v) = lambert_tower();
    t.set_tracing(true);
    decide(&t, &lambert_identity(&t, u, v)).unwrap();
    let lines = t.take_trace();
    t.set_tracing(false);
    assert!(lines.iter().any(|l| l.starts_with("zerotest[V]")), "{lines:?}");
    assert!(lines.iter().any(|l| l.starts_with("  zerotest[U]")));
    assert!(lines.iter().any(|l| l.contains("step 6")));
}

fn coefficient() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, -1i64..=1)
}

type TermSpec = ((i64, i64), (u32, u32, u32));

fn random_poly(t: &Tower, terms: &[TermSpec]) -> DiffPolynomial {
    let x = t.basis_element(1);
    let mut p = DiffPolynomial::zero(t.dim());
    for &((k, a), (e0, e1, e2)) in terms {
        let coeff = x.pow(a).unwrap().scale(&q(k, 1));
        p = p.add(&DiffPolynomial::from_terms(t.dim(), [(DiffMono::new(vec![e0, e1, e2]), coeff)]));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn remainders_are_reduced_and_agree_on_solutions(
        terms in prop::collection::vec((coefficient(), (0u32..3, 0u32..3, 0u32..2)), 1..4),
    ) {
        // Q = F F' + F^2 is solved by 1/x with I = S = F.
        let t = x_tower();
        let f = var(&t, 0);
        let qq = f.mul(&var(&t, 1)).add(&f.mul(&f));
        let p = random_poly(&t, &terms);
        let r = ritt_reduce(&t, &p, std::slice::from_ref(&qq)).unwrap();
        prop_assert!(r.remainder.order().is_none_or(|o| o <= 1));
        prop_assert!(r.remainder.degree_in(1) < 1);
        let sol = t.expansion_variable(1);
        let a = r.initial_powers[0] + r.separant_powers[0];
        let lhs = sol.pow(a as i64).unwrap().mul(&p.evaluate(&t, &sol));
        prop_assert!(t.equal(&lhs, &r.remainder.evaluate(&t, &sol)).unwrap());
    }

    #[test]
    fn ideal_members_vanish_and_perturbations_do_not(
        a in coefficient(),
        b in coefficient(),
        k in 3i64..7,
        w in prop_oneof![-2i64..0, 1i64..3],
    ) {
        let t = exp_tower();
        let u = extend(&t, "U", &lambert_p(&t)).unwrap();
        let n = names(&t);
        let p = lambert_p(&t);
        let coeff = |(k, e): (i64, i64)| n.x.pow(e).unwrap().scale(&BigRational::from_integer(k.into()));
        let member = p.scale(&coeff(a)).add(&p.derive(&t).scale(&coeff(b)));
        prop_assume!(!member.pruned(&t).unwrap().is_zero());
        prop_assert!(zero_test(&t, u, vec![member.clone()]).unwrap());
        let bump = n.emx.pow(k).unwrap().scale(&q(w, 1));
        let perturbed = member.add(&c(&bump));
        prop_assert!(!zero_test(&t, u, vec![perturbed]).unwrap());
    }
}
