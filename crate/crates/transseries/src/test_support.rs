//! Shared fixtures for unit tests.

use num_rational::BigRational;

use crate::diffpoly::DiffPolynomial;
use crate::field_tower::{Element, GenId, Tower};
use crate::transbasis::{BasisEntry, Transbasis};
use crate::zerotest::extend;

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `(x)`.
pub(crate) fn x_tower() -> Tower {
    Tower::new(Transbasis::x())
}

/// `(x, exp(x))`.
pub(crate) fn exp_tower() -> Tower {
    let x = x_tower().basis_element(1);
    Tower::new(Transbasis::validate(&[BasisEntry::IteratedLog(0), BasisEntry::Exp(x)]).unwrap())
}

pub(crate) struct Names {
    pub x: Element,
    pub ex: Element,
    pub emx: Element,
    pub one: Element,
    pub xinv: Element,
}

pub(crate) fn names(t: &Tower) -> Names {
    Names {
        x: t.basis_element(1),
        ex: t.basis_element(2),
        emx: t.expansion_variable(2),
        one: t.one(),
        xinv: t.expansion_variable(1),
    }
}

pub(crate) fn c(e: &Element) -> DiffPolynomial {
    DiffPolynomial::constant(e.clone())
}

/// `(x - 1)e^{-2x} + (1/x - e^{-x} + e^{-x}/x) F' + (1 - x e^{-x}) F + F F'/x + F^2`.
pub(crate) fn lambert_p(t: &Tower) -> DiffPolynomial {
    let Names { x, emx, one, xinv, .. } = names(t);
    let n = t.dim();
    let f = DiffPolynomial::var(n, 0);
    let df = DiffPolynomial::var(n, 1);
    c(&x.sub(&one).mul(&emx).mul(&emx))
        .add(&df.scale(&xinv.sub(&emx).add(&emx.mul(&xinv))))
        .add(&f.scale(&one.sub(&x.mul(&emx))))
        .add(&f.mul(&df).scale(&xinv))
        .add(&f.mul(&f))
}

/// `e^x (U + x^{-1} U') (F + 1) - x^{-1} F'`.
pub(crate) fn omega(t: &Tower, u: GenId) -> DiffPolynomial {
    let Names { ex, one, xinv, .. } = names(t);
    let n = t.dim();
    let f = DiffPolynomial::var(n, 0);
    let df = DiffPolynomial::var(n, 1);
    let coeff = ex.mul(&t.gen_var(u, 0).add(&xinv.mul(&t.gen_var(u, 1))));
    f.add(&c(&one)).scale(&coeff).sub(&df.scale(&xinv))
}

/// The tower with `U` and `V` adjoined.
pub(crate) fn lambert_tower() -> (Tower, GenId, GenId) {
    let t = exp_tower();
    let u = extend(&t, "U", &lambert_p(&t)).unwrap();
    let v = extend(&t, "V", &omega(&t, u)).unwrap();
    (t, u, v)
}

/// `(U + 1 - x e^{-x})(1 + V) - 1`.
pub(crate) fn lambert_identity(t: &Tower, u: GenId, v: GenId) -> Element {
    let Names { x, emx, one, .. } = names(t);
    t.gen_var(u, 0).add(&one).sub(&x.mul(&emx)).mul(&one.add(&t.gen_var(v, 0))).sub(&one)
}
