//! Anti-lexicographic comparison of exponent vectors and grid enumeration.

use transseries::order_core::{compare_antilex, ExponentVector, GridCertificate};

fn main() -> transseries::Result<()> {
    let pairs = [([2, 0], [1, 1]), ([0, 1], [5, 0]), ([3, 2], [3, 2])];
    for (a, b) in pairs {
        let (a, b) = (ExponentVector::from_ints(&a), ExponentVector::from_ints(&b));
        println!("{a} vs {b}: {:?}", compare_antilex(&a, &b)?);
    }

    let grid = GridCertificate::new(
        vec![ExponentVector::from_ints(&[1, 1]), ExponentVector::from_ints(&[-1, 1])],
        ExponentVector::zeros(2),
    )?;
    let below = grid.enumerate_below(&ExponentVector::from_ints(&[0, 3]))?;
    println!("grid points below (0, 3):");
    for p in below {
        println!("  {p}");
    }
    Ok(())
}
