//! exp and log of transseries, extending the basis when needed.

use transseries::field_tower::{RenderMode, Tower};
use transseries::order_core::ExponentScalar;
use transseries::transbasis::{exp, log, Transbasis};

fn main() -> transseries::Result<()> {
    let t = Tower::new(Transbasis::x());
    let x = t.basis_element(1);
    let phi = x.mul(&x).add(&t.expansion_variable(1));

    let e = exp(&t, &phi)?;
    let basis: Vec<String> =
        (1..=e.tower.dim()).map(|k| e.tower.render(&e.tower.basis_element(k), RenderMode::Pretty)).collect();
    println!("basis after exp: ({})", basis.join(", "));
    println!("exp(x^2 + 1/x) = {}", e.tower.render(&e.value, RenderMode::Pretty));
    for id in 0..e.tower.generator_count() {
        let id = transseries::field_tower::GenId(id);
        let s = e.tower.generator_stream(id, 0);
        let shown = e.tower.render_series(&s, 1, &ExponentScalar::int(4), RenderMode::Pretty)?;
        println!("  {} = {shown}", e.tower.generator(id).name());
    }

    let l = log(&t, &x.add(&t.one()))?;
    println!("log(x + 1) = {}", l.tower.render(&l.value, RenderMode::Pretty));
    Ok(())
}
