//! Lazy Puiseux-style series with exact rational coefficients.

use num_rational::BigRational;
use transseries::lazy_series::{LazySeries, RationalDomain, Term};
use transseries::order_core::ExponentScalar;

fn show(name: &str, s: &LazySeries<RationalDomain>) -> transseries::Result<()> {
    let terms: Vec<String> =
        s.terms_below(&ExponentScalar::int(4))?.iter().map(|t| format!("({})*z^({})", t.coeff, t.exponent)).collect();
    println!("{name} = {} + O(z^4)", terms.join(" + "));
    Ok(())
}

fn main() -> transseries::Result<()> {
    let q = |n: i64| BigRational::from_integer(n.into());
    // 1 - z^(1/2)
    let a = LazySeries::from_terms(
        RationalDomain,
        vec![Term::new(q(1), ExponentScalar::zero()), Term::new(q(-1), ExponentScalar::ratio(1, 2))],
    );
    let inv = a.inverse()?;
    show("a", &a)?;
    show("1/a", &inv)?;
    show("a * (1/a)", &a.mul(&inv))?;
    show("(1/a)^2", &inv.mul(&inv))?;
    Ok(())
}
