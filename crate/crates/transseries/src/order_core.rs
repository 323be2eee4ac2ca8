//! Exponent arithmetic, anti-lexicographic order, grid certificates and
//! root bounds.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact exponent. Rationals are the only scalar field shipped.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExponentScalar(pub BigRational);

impl ExponentScalar {
    pub fn zero() -> Self {
        ExponentScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExponentScalar(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        ExponentScalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExponentScalar(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExponentScalar(self.0.abs())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExponentScalar(&self.0 / &other.0))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl Default for ExponentScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<BigRational> for ExponentScalar {
    fn from(r: BigRational) -> Self {
        ExponentScalar(r)
    }
}

impl From<i64> for ExponentScalar {
    fn from(n: i64) -> Self {
        ExponentScalar::int(n)
    }
}

impl fmt::Display for ExponentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for ExponentScalar {
            type Output = ExponentScalar;
            fn $m(self, rhs: ExponentScalar) -> ExponentScalar {
                ExponentScalar(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a ExponentScalar> for &'a ExponentScalar {
            type Output = ExponentScalar;
            fn $m(self, rhs: &'a ExponentScalar) -> ExponentScalar {
                ExponentScalar(&self.0 $op &rhs.0)
            }
        }
    };
}
scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for ExponentScalar {
    type Output = ExponentScalar;
    fn neg(self) -> ExponentScalar {
        ExponentScalar(-self.0)
    }
}

impl Neg for &ExponentScalar {
    type Output = ExponentScalar;
    fn neg(self) -> ExponentScalar {
        ExponentScalar(-&self.0)
    }
}

impl AddAssign<&ExponentScalar> for ExponentScalar {
    fn add_assign(&mut self, rhs: &ExponentScalar) {
        self.0 += &rhs.0;
    }
}

/// A point of the exponent group, coordinate `i` belonging to the basis
/// element `b_{i+1}`. The monomial is `b^{-alpha}`, so positive vectors are
/// small monomials.
///
/// `Ord` is anti-lexicographic and panics on length mismatch; use
/// [`compare_antilex`] when lengths are not known to agree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector(Vec<ExponentScalar>);

impl ExponentVector {
    pub fn new(coords: Vec<ExponentScalar>) -> Self {
        ExponentVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ExponentVector(coords.iter().map(|&c| ExponentScalar::int(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![ExponentScalar::zero(); n])
    }

    /// The vector with `value` at coordinate `index` and zeros elsewhere.
    pub fn unit(n: usize, index: usize, value: ExponentScalar) -> Self {
        let mut v = Self::zeros(n);
        v.0[index] = value;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[ExponentScalar] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &ExponentScalar {
        &self.0[i]
    }

    pub fn set(&mut self, i: usize, value: ExponentScalar) {
        self.0[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ExponentScalar::is_zero)
    }

    /// Index of the highest nonzero coordinate.
    pub fn highest_nonzero(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    /// Number of leading coordinates needed to describe the vector
    /// (one past the highest nonzero index).
    pub fn level(&self) -> usize {
        self.highest_nonzero().map_or(0, |i| i + 1)
    }

    pub fn is_positive(&self) -> bool {
        self.highest_nonzero().is_some_and(|i| self.0[i].is_positive())
    }

    pub fn is_negative(&self) -> bool {
        self.highest_nonzero().is_some_and(|i| self.0[i].is_negative())
    }

    pub fn scale(&self, k: &ExponentScalar) -> Self {
        ExponentVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Copy with the coordinates at and above `from` set to zero.
    pub fn truncated(&self, from: usize) -> Self {
        let mut v = self.clone();
        for c in v.0.iter_mut().skip(from) {
            *c = ExponentScalar::zero();
        }
        v
    }

    /// Copy with a zero coordinate inserted at `pos`.
    pub fn with_inserted(&self, pos: usize) -> Self {
        let mut v = self.0.clone();
        v.insert(pos, ExponentScalar::zero());
        ExponentVector(v)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_len(self, other)?;
        Ok(self + other)
    }
}

fn check_len(a: &ExponentVector, b: &ExponentVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(())
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a ExponentVector> for &'a ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &'a ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), rhs.len(), "exponent vector length mismatch");
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a ExponentVector> for &'a ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &'a ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), rhs.len(), "exponent vector length mismatch");
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_antilex(self, other).expect("exponent vector length mismatch")
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Anti-lexicographic comparison: the last differing coordinate decides.
pub fn compare_antilex(a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
    check_len(a, b)?;
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    Ok(Ordering::Equal)
}

/// How two certificates are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    /// Support of a sum.
    Union,
    /// Support of a product.
    Minkowski,
    /// Support of a geometric series in the first argument.
    Star,
}

/// A finite description `N g_1 + ... + N g_k + offset` of a grid-based
/// support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GridCertificate {
    generators: Vec<ExponentVector>,
    offset: ExponentVector,
}

const ENUMERATION_CAP: usize = 1 << 20;

impl GridCertificate {
    pub fn new(generators: Vec<ExponentVector>, offset: ExponentVector) -> Result<Self> {
        for g in &generators {
            check_len(g, &offset)?;
            if !g.is_positive() {
                return Err(Error::Contract(format!("grid generator {g} is not positive")));
            }
        }
        Ok(Self::normalized(generators, offset))
    }

    fn normalized(mut generators: Vec<ExponentVector>, offset: ExponentVector) -> Self {
        generators.sort();
        generators.dedup();
        GridCertificate { generators, offset }
    }

    /// The singleton `{offset}`.
    pub fn point(offset: ExponentVector) -> Self {
        GridCertificate { generators: Vec::new(), offset }
    }

    /// One-dimensional certificate with integer generators.
    pub fn scalar(generators: &[ExponentScalar], offset: ExponentScalar) -> Result<Self> {
        Self::new(
            generators.iter().map(|g| ExponentVector::new(vec![g.clone()])).collect(),
            ExponentVector::new(vec![offset]),
        )
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn offset(&self) -> &ExponentVector {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    /// Translate the whole grid.
    pub fn shifted(&self, by: &ExponentVector) -> Self {
        GridCertificate { generators: self.generators.clone(), offset: &self.offset + by }
    }

    /// Extra generators (all positive) with the same offset.
    pub fn with_generators(&self, extra: &[ExponentVector]) -> Self {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Self::normalized(gens, self.offset.clone())
    }

    pub fn combine(&self, other: &GridCertificate, mode: CombineMode) -> Result<GridCertificate> {
        match mode {
            CombineMode::Union => {
                check_len(&self.offset, &other.offset)?;
                let mut gens = self.generators.clone();
                gens.extend(other.generators.iter().cloned());
                let offset = self.offset.clone().min(other.offset.clone());
                Ok(Self::normalized(gens, offset))
            }
            CombineMode::Minkowski => {
                check_len(&self.offset, &other.offset)?;
                let mut gens = self.generators.clone();
                gens.extend(other.generators.iter().cloned());
                Ok(Self::normalized(gens, &self.offset + &other.offset))
            }
            CombineMode::Star => {
                if !self.offset.is_positive() {
                    return Err(Error::NotInfinitesimal);
                }
                let mut gens = self.generators.clone();
                gens.push(self.offset.clone());
                Ok(Self::normalized(gens, ExponentVector::zeros(self.dim())))
            }
        }
    }

    /// All certified points `<= bound`, increasing.
    ///
    /// Fails when that set is infinite, which happens in several dimensions
    /// when a generator lives strictly below a coordinate where the bound
    /// still has room.
    pub fn enumerate_below(&self, bound: &ExponentVector) -> Result<Vec<ExponentVector>> {
        check_len(&self.offset, bound)?;
        let mut seen = BTreeSet::new();
        if self.offset > *bound {
            return Ok(Vec::new());
        }
        let mut queue = VecDeque::from([self.offset.clone()]);
        seen.insert(self.offset.clone());
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = &p + g;
                if q > *bound {
                    continue;
                }
                let top = g.highest_nonzero().expect("generators are nonzero");
                if ((top + 1)..p.len()).any(|i| p.get(i) != bound.get(i)) {
                    return Err(Error::InfiniteEnumeration(format!("ray {p} + N{g} stays below {bound}")));
                }
                if seen.insert(q.clone()) {
                    if seen.len() > ENUMERATION_CAP {
                        return Err(Error::InfiniteEnumeration(format!(
                            "more than {ENUMERATION_CAP} points below {bound}"
                        )));
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    pub fn contains(&self, point: &ExponentVector) -> Result<bool> {
        check_len(&self.offset, point)?;
        let target = point - &self.offset;
        Ok(representable(&target, &self.generators, self.dim()))
    }

    /// Positive generators `G'` such that every positive certified point lies
    /// in `N G'`. Used to certify solutions built from positive parts only.
    pub fn positive_part_generators(&self) -> Result<Vec<ExponentVector>> {
        let mut out = self.generators.clone();
        if self.offset.is_positive() {
            out.push(self.offset.clone());
        } else if let Some(max) = self.generators.last() {
            for p in self.enumerate_below(max)? {
                if p.is_positive() {
                    out.push(p);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Is `target` a nonnegative integer combination of `gens`? Coordinates are
/// fixed from the top down: only generators whose highest nonzero
/// coordinate is `level - 1` can contribute there, finitely many ways.
fn representable(target: &ExponentVector, gens: &[ExponentVector], level: usize) -> bool {
    if level == 0 {
        return target.is_zero();
    }
    let top = level - 1;
    if target.coords()[level..].iter().any(|c| !c.is_zero()) {
        return false;
    }
    let (here, below): (Vec<_>, Vec<_>) = gens.iter().cloned().partition(|g| g.highest_nonzero() == Some(top));
    fn choose(target: &ExponentVector, here: &[ExponentVector], below: &[ExponentVector], top: usize) -> bool {
        let t = target.get(top);
        if t.is_negative() {
            return false;
        }
        match here.split_first() {
            None => t.is_zero() && representable(target, below, top),
            Some((g, rest)) => {
                let mut cur = target.clone();
                loop {
                    if choose(&cur, rest, below, top) {
                        return true;
                    }
                    cur = &cur - g;
                    if cur.get(top).is_negative() {
                        return false;
                    }
                }
            }
        }
    }
    choose(target, &here, &below, top)
}

/// A valuation, with `+inf` for the zero series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtendedValuation {
    Finite(ExponentVector),
    Infinite,
}

impl ExtendedValuation {
    pub fn finite(&self) -> Option<&ExponentVector> {
        match self {
            ExtendedValuation::Finite(v) => Some(v),
            ExtendedValuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedValuation::Infinite)
    }
}

impl Ord for ExtendedValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedValuation::Infinite, ExtendedValuation::Infinite) => Ordering::Equal,
            (ExtendedValuation::Infinite, _) => Ordering::Greater,
            (_, ExtendedValuation::Infinite) => Ordering::Less,
            (ExtendedValuation::Finite(a), ExtendedValuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtendedValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValuation::Finite(v) => write!(f, "{v}"),
            ExtendedValuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Result of a flat comparison. `LittleO` is reported whenever it holds,
/// even though it implies `BigO`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatRelation {
    BigO,
    LittleO,
    Neither,
}

/// Compares `|g|` with `|h|` up to arbitrary integer multiples. Only the
/// index of the highest nonzero coordinate matters.
pub fn flat_compare(g: &ExtendedValuation, h: &ExtendedValuation) -> FlatRelation {
    let (ExtendedValuation::Finite(g), ExtendedValuation::Finite(h)) = (g, h) else {
        return FlatRelation::Neither;
    };
    let (gi, hi) = (g.highest_nonzero(), h.highest_nonzero());
    if hi > gi {
        FlatRelation::LittleO
    } else if gi <= hi {
        FlatRelation::BigO
    } else {
        FlatRelation::Neither
    }
}

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `prod (N - r)`.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        let mut p = Self::constant(BigRational::one());
        for r in roots {
            p = p.mul(&Self::new(vec![-r.clone(), BigRational::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(N + a)`.
    pub fn shift(&self, a: &BigRational) -> Self {
        let lin = Self::new(vec![a.clone(), BigRational::one()]);
        self.coeffs.iter().rev().fold(Self::default(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "N".to_string(),
                _ => format!("N^{i}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

/// Upper bound for the real roots of a nonconstant `p`: `0` for the factor
/// `N^k`, and the Cauchy bound `1 + max |a_i / a_deg|` for the rest.
pub fn real_root_upper_bound(p: &RationalPoly) -> Result<ExponentScalar> {
    let Some(lead) = p.coeffs.last() else {
        return Err(Error::ZeroPolynomial);
    };
    let low = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let rest = &p.coeffs[low..];
    if rest.len() == 1 {
        return Ok(ExponentScalar::zero());
    }
    let max = rest[..rest.len() - 1].iter().map(|a| (a / lead).abs()).max().unwrap_or_else(BigRational::zero);
    Ok(ExponentScalar(max + BigRational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> ExponentVector {
        ExponentVector::from_ints(c)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn cert(gens: &[&[i64]], off: &[i64]) -> GridCertificate {
        GridCertificate::new(gens.iter().map(|g| v(g)).collect(), v(off)).unwrap()
    }

    #[test]
    fn antilex_examples() {
        assert_eq!(compare_antilex(&v(&[2, 0]), &v(&[1, 1])).unwrap(), Ordering::Less);
        assert_eq!(compare_antilex(&v(&[3, 5]), &v(&[3, 5])).unwrap(), Ordering::Equal);
        // Second coordinate decides: 1 > 0.
        let ord = compare_antilex(&v(&[-1, 1, 0]), &v(&[0, 0, 0])).unwrap();
        let reversed = |x: &[i64]| x.iter().rev().copied().collect::<Vec<_>>();
        assert_eq!(ord, reversed(&[-1, 1, 0]).cmp(&reversed(&[0, 0, 0])));
        assert_eq!(ord, Ordering::Greater);
    }

    #[test]
    fn antilex_length_mismatch() {
        assert_eq!(compare_antilex(&v(&[1]), &v(&[1, 2])), Err(Error::LengthMismatch(1, 2)));
    }

    #[test]
    fn combine_examples() {
        let u = cert(&[&[1, 0]], &[0, 0]).combine(&cert(&[&[0, 1]], &[0, 0]), CombineMode::Union).unwrap();
        assert_eq!(u, cert(&[&[1, 0], &[0, 1]], &[0, 0]));

        let a = cert(&[&[1, 0]], &[-1, 0]);
        assert_eq!(a.combine(&a, CombineMode::Minkowski).unwrap(), cert(&[&[1, 0]], &[-2, 0]));

        let s = cert(&[&[1, 0]], &[0, 1]);
        let star = s.combine(&s, CombineMode::Star).unwrap();
        assert_eq!(star, cert(&[&[1, 0], &[0, 1]], &[0, 0]));

        let bad = cert(&[&[1, 0]], &[0, 0]);
        assert_eq!(bad.combine(&bad, CombineMode::Star), Err(Error::NotInfinitesimal));
    }

    /// Brute-force truncated bivariate polynomials: 1/(1 - z1^a z2) to five
    /// terms lands in the STAR certificate.
    #[test]
    fn star_covers_geometric_series() {
        for a in 0..3i64 {
            let g = cert(&[&[1, 0]], &[a, 1]);
            let star = g.combine(&g, CombineMode::Star).unwrap();
            // (z1^a z2)^k has exponent (k a, k).
            for k in 0..5 {
                assert!(star.contains(&v(&[k * a, k])).unwrap());
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let c = cert(&[&[1]], &[0]);
        assert_eq!(c.enumerate_below(&v(&[3])).unwrap(), vec![v(&[0]), v(&[1]), v(&[2]), v(&[3])]);
        assert!(cert(&[&[1]], &[5]).enumerate_below(&v(&[3])).unwrap().is_empty());

        let got = cert(&[&[2], &[3]], &[0]).enumerate_below(&v(&[7])).unwrap();
        let mut brute = BTreeSet::new();
        for i in 0..=3 {
            for j in 0..=2 {
                if 2 * i + 3 * j <= 7 {
                    brute.insert(v(&[2 * i + 3 * j]));
                }
            }
        }
        assert_eq!(got, brute.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn enumerate_detects_infinite_rays() {
        let c = cert(&[&[1, 0]], &[0, 0]);
        assert!(matches!(c.enumerate_below(&v(&[0, 1])), Err(Error::InfiniteEnumeration(_))));
        // Same top coordinate as the bound: finite.
        assert_eq!(c.enumerate_below(&v(&[2, 0])).unwrap().len(), 3);
    }

    #[test]
    fn positive_part() {
        let c = GridCertificate::scalar(&[ExponentScalar::int(3)], ExponentScalar::int(-4)).unwrap();
        let pp = c.positive_part_generators().unwrap();
        assert_eq!(pp, vec![v(&[2]), v(&[3])]);
    }

    #[test]
    fn flat_examples() {
        use ExtendedValuation::*;
        assert_eq!(flat_compare(&Finite(v(&[1, 0])), &Finite(v(&[0, 1]))), FlatRelation::LittleO);
        assert_eq!(flat_compare(&Finite(v(&[2, 0])), &Finite(v(&[1, 0]))), FlatRelation::BigO);
        assert_eq!(flat_compare(&Infinite, &Finite(v(&[1, 0]))), FlatRelation::Neither);
        assert_eq!(flat_compare(&Finite(v(&[0, 1])), &Finite(v(&[1, 0]))), FlatRelation::Neither);
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(real_root_upper_bound(&RationalPoly::from_ints(&[0, 1])).unwrap(), ExponentScalar::int(0));
        assert_eq!(real_root_upper_bound(&RationalPoly::from_ints(&[0, 0, 3, -1])).unwrap(), ExponentScalar::int(4));
        assert_eq!(real_root_upper_bound(&RationalPoly::from_ints(&[1, -1])).unwrap(), ExponentScalar::int(2));
        assert_eq!(real_root_upper_bound(&RationalPoly::from_ints(&[1, 0, 1])).unwrap(), ExponentScalar::int(2));
        assert_eq!(real_root_upper_bound(&RationalPoly::default()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn poly_shift_and_display() {
        let p = RationalPoly::from_ints(&[1, -1]);
        assert_eq!(p.to_string(), "1 - N");
        assert_eq!(p.shift(&q(1)), RationalPoly::from_ints(&[0, -1]));
        assert_eq!(RationalPoly::from_ints(&[0, 1]).to_string(), "N");
        assert_eq!(RationalPoly::from_roots(&[q(1), q(2)]).eval(&q(2)), q(0));
    }
}
