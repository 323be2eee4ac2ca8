//! Distinguished solutions of linear equations over (x, exp(x)).

use transseries::field_tower::{RenderMode, Tower};
use transseries::linear_ode::{dsolve_linear, LinearOperator};
use transseries::order_core::ExponentScalar;
use transseries::transbasis::{BasisEntry, Transbasis};

fn main() -> transseries::Result<()> {
    let x = Tower::new(Transbasis::x()).basis_element(1);
    let t = Tower::new(Transbasis::validate(&[BasisEntry::IteratedLog(0), BasisEntry::Exp(x)])?);
    let x = t.basis_element(1);
    let emx = t.expansion_variable(2);

    // (d_2 + 1) f = x^2 exp(-2x) + exp(-3x)
    let l = LinearOperator::new(vec![t.one(), t.one()], 2);
    println!("L = {}, I_L(N) = {}", l.render(&t, RenderMode::Pretty), l.indicial(&t)?);
    let g = x.mul(&x).mul(&emx).mul(&emx).add(&emx.pow(3)?);
    let f = dsolve_linear(&t, &l, &t.expand(&g, 2)?, 2)?;
    let bound = ExponentScalar::int(5);
    println!("f = {}", t.render_series(&f, 2, &bound, RenderMode::Pretty)?);
    let back = l.apply_series(&t, &f, 2)?;
    println!("L f = {}", t.render_series(&back, 2, &bound, RenderMode::Pretty)?);
    Ok(())
}
