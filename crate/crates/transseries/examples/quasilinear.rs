//! Solving a quasi-linear differential equation and adjoining its solution.

use transseries::diffpoly::{adjoin_solution, DiffPolynomial};
use transseries::field_tower::{RenderMode, Tower};
use transseries::order_core::ExponentScalar;
use transseries::transbasis::{BasisEntry, Transbasis};

fn main() -> transseries::Result<()> {
    let x = Tower::new(Transbasis::x()).basis_element(1);
    let t = Tower::new(Transbasis::validate(&[BasisEntry::IteratedLog(0), BasisEntry::Exp(x)])?);
    let (x, emx, one) = (t.basis_element(1), t.expansion_variable(2), t.one());
    let xinv = t.expansion_variable(1);
    let c = |e: &transseries::field_tower::Element| DiffPolynomial::constant(e.clone());
    let f = DiffPolynomial::var(2, 0);
    let df = DiffPolynomial::var(2, 1);

    let p = c(&x.sub(&one).mul(&emx).mul(&emx))
        .add(&df.scale(&xinv.sub(&emx).add(&emx.mul(&xinv))))
        .add(&f.scale(&one.sub(&x.mul(&emx))))
        .add(&f.mul(&df).scale(&xinv))
        .add(&f.mul(&f));
    println!("P = {}", p.render(&t, RenderMode::Pretty));
    let (v, v0, v1) = p.valuation_triple(&t)?;
    println!("v(P) = {v}, v(P_[0]) = {v0}, v(P_[1]) = {v1}");

    let u = adjoin_solution(&t, "U", &p)?;
    let s = t.generator_stream(u, 0);
    println!("U = {}", t.render_series(&s, 2, &ExponentScalar::int(6), RenderMode::Pretty)?);
    let residual = p.evaluate(&t, &t.gen_var(u, 0));
    println!("P(U) is zero: {}", t.zero_test(&residual)?);
    Ok(())
}
