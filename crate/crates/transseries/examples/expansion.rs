//! Expanding elements of Q(x, exp(x)) and the base zero test.

use transseries::field_tower::{RenderMode, Tower};
use transseries::order_core::ExponentScalar;
use transseries::transbasis::{BasisEntry, Transbasis};

fn main() -> transseries::Result<()> {
    let x = Tower::new(Transbasis::x()).basis_element(1);
    let t = Tower::new(Transbasis::validate(&[BasisEntry::IteratedLog(0), BasisEntry::Exp(x)])?);
    let z1 = t.expansion_variable(1);
    let z2 = t.expansion_variable(2);

    let e = t.inv(&t.one().sub(&z1).sub(&z2))?;
    let s = t.expand(&e, 2)?;
    println!("1/(1 - 1/x - exp(-x)) = {}", t.render_series(&s, 2, &ExponentScalar::int(3), RenderMode::Pretty)?);

    let f = t.inv(&t.one().sub(&z1))?;
    let d = s.sub(&t.expand(&f, 2)?);
    let c0 = d.coefficient(&ExponentScalar::zero())?;
    println!(
        "exp(0) coefficient of the difference: {} (zero: {})",
        t.render(&c0, RenderMode::Pretty),
        t.zero_test(&c0)?
    );
    if let Some((alpha, c)) = t.dominant(&e.sub(&f))? {
        println!("dominant term of the difference: {c} * b^-{alpha}");
    }
    println!("d(x^2 exp(-x)) = {}", t.render(&t.derive(&x_squared_emx(&t)), RenderMode::Pretty));
    Ok(())
}

fn x_squared_emx(t: &Tower) -> transseries::field_tower::Element {
    let x = t.basis_element(1);
    x.mul(&x).mul(&t.expansion_variable(2))
}
