use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::test_support::{exp_tower, names, q, x_tower};

fn s(k: i64) -> ExponentScalar {
    ExponentScalar::int(k)
}

/// Nonzero terms of `a - b` below `bound`.
fn difference_below(t: &Tower, a: &SliceSeries, b: &SliceSeries, bound: i64) -> Result<Vec<ExponentScalar>> {
    let mut out = Vec::new();
    for term in a.sub(b).raw_terms_below(&s(bound))? {
        if !t.zero_test(&term.coeff)? {
            out.push(term.exponent);
        }
    }
    Ok(out)
}

#[test]
fn conjugation_shifts_the_derivation() {
    let t = exp_tower();
    let l = LinearOperator::new(vec![t.one(), t.one()], 2);
    let m = l.conj_mul(&t, &ExponentVector::from_ints(&[0, 2])).unwrap();
    assert_eq!(m, LinearOperator::new(vec![t.int(-1), t.one()], 2));
    let n = names(&t);
    let f = n.x.mul(&n.emx);
    let lhs = m.apply(&t, &f);
    let weight = t.monomial(&ExponentVector::from_ints(&[0, 2]));
    let rhs = l.apply(&t, &f.mul(&weight)).div(&weight).unwrap();
    assert!(t.equal(&lhs, &rhs).unwrap());
}

#[test]
fn change_of_derivation() {
    let t = exp_tower();
    let n = names(&t);
    let d2 = LinearOperator::derivation_op(&t, 2);
    let d1 = d2.to_derivation(&t, 1).unwrap();
    assert_eq!(d1, LinearOperator::new(vec![t.zero(), n.xinv.clone()], 1));
    let f = n.x.mul(&n.x).mul(&n.emx);
    assert!(t.equal(&d1.apply(&t, &f), &d2.apply(&t, &f)).unwrap());
    let back = d1.to_derivation(&t, 2).unwrap();
    assert!(t.equal(&back.apply(&t, &f), &d2.apply(&t, &f)).unwrap());
}

#[test]
fn indicial_polynomials() {
    let t = exp_tower();
    let l = LinearOperator::new(vec![t.one(), t.one()], 2);
    assert_eq!(l.indicial(&t).unwrap(), RationalPoly::from_ints(&[1, -1]));
    assert_eq!(l.valuation_at(&t, 2).unwrap(), Some(s(0)));
    let n = names(&t);
    let l = LinearOperator::new(vec![n.emx.clone(), t.one()], 2);
    assert_eq!(l.indicial(&t).unwrap(), RationalPoly::from_ints(&[0, -1]));
    assert_eq!(l.nu(&t, &ExponentVector::zeros(2)).unwrap(), 0);
    let d = LinearOperator::derivation_op(&t, 2);
    assert_eq!(d.nu(&t, &ExponentVector::zeros(2)).unwrap(), 1);
    assert_eq!(d.nu(&t, &ExponentVector::from_ints(&[0, 1])).unwrap(), 0);
}

#[test]
fn trailing_zeros_are_trimmed() {
    let t = x_tower();
    let l = LinearOperator::new(vec![t.one(), t.zero(), t.zero()], 1);
    assert_eq!(l.order(), Some(0));
    assert!(LinearOperator::new(vec![t.zero()], 1).is_zero());
}

#[test]
fn scalar_level_solution_matches_recurrence() {
    let t = x_tower();
    let z = t.expansion_variable(1);
    // (d_1 + 1/2) f = 1/(1 - z): f_k (1/2 - k) = 1.
    let l = LinearOperator::new(vec![t.constant(q(1, 2)), t.one()], 1);
    let g = t.expand(&t.inv(&t.one().sub(&z)).unwrap(), 1).unwrap();
    let f = dsolve_linear(&t, &l, &g, 1).unwrap();
    for (k, term) in f.raw_terms_below(&s(12)).unwrap().iter().enumerate() {
        assert_eq!(term.exponent, s(k as i64));
        let expected = (q(1, 2) - q(k as i64, 1)).recip();
        assert_eq!(term.coeff.as_constant(), Some(expected));
    }
    let back = l.apply_series(&t, &f, 1).unwrap();
    assert!(difference_below(&t, &back, &g, 12).unwrap().is_empty());
}

#[test]
fn resonance_is_reported() {
    let t = x_tower();
    let l = LinearOperator::derivation_op(&t, 1);
    let g = t.expand(&t.one(), 1).unwrap();
    let f = dsolve_linear(&t, &l, &g, 1).unwrap();
    assert!(matches!(f.head(), Err(Error::Resonance(_))));
}

#[test]
fn two_level_solution_roundtrips() {
    let t = exp_tower();
    let n = names(&t);
    // (d_1 + x) f = x e^{-x} + x e^{-2x}, solved by x e^{-x} - e^{-2x}
    let l = LinearOperator::new(vec![n.x.clone(), t.one()], 1);
    let g = n.x.mul(&n.emx).add(&n.x.mul(&n.emx).mul(&n.emx));
    let gs = t.expand(&g, 2).unwrap();
    let f = dsolve_linear(&t, &l, &gs, 2).unwrap();
    let back = l.apply_series(&t, &f, 2).unwrap();
    assert!(difference_below(&t, &back, &gs, 12).unwrap().is_empty());
    let closed = t.truncation(&f, 2, &s(12)).unwrap();
    assert_eq!(closed, n.x.mul(&n.emx).sub(&n.emx.mul(&n.emx)));
    assert!(t.equal(&l.apply(&t, &closed), &g).unwrap());
}

#[test]
fn infinite_coefficients_leave_the_field() {
    let t = exp_tower();
    let n = names(&t);
    let l = LinearOperator::new(vec![t.one(), t.one()], 2);
    let g = n.xinv.mul(&n.emx).mul(&n.emx);
    let f = dsolve_linear(&t, &l, &t.expand(&g, 2).unwrap(), 2).unwrap();
    assert!(matches!(f.head(), Err(Error::NotInAmbientField(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solutions_invert_the_operator(
        c0 in 1i64..4,
        c1 in prop_oneof![-3i64..0, 1i64..4],
        g in prop::collection::vec((-3i64..4, 0i64..3, 1i64..3), 1..3),
    ) {
        let t = exp_tower();
        let l = LinearOperator::new(vec![t.int(c0), t.int(c1)], 2);
        let mut rhs = t.zero();
        for (c, a, b) in g {
            let m = t.monomial(&ExponentVector::from_ints(&[-a, b]));
            rhs = rhs.add(&m.scale(&BigRational::from_integer(c.into())));
        }
        prop_assume!(!rhs.is_zero());
        let gs = t.expand(&rhs, 2).unwrap();
        let f = dsolve_linear(&t, &l, &gs, 2).unwrap();
        match l.apply_series(&t, &f, 2).and_then(|back| difference_below(&t, &back, &gs, 12)) {
            Ok(diff) => prop_assert!(diff.is_empty()),
            Err(Error::Resonance(_)) => prop_assert!(c0 % c1 == 0 && c0 / c1 > 0),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
