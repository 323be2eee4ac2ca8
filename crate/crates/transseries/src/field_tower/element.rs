//! Closed-form tower elements: fractions of sparse sums
//! `c * b^{-alpha} * prod (d^j f)^p` over basis monomials and adjoined
//! generators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order_core::{ExponentScalar, ExponentVector};

/// Index of an adjoined generator inside its tower.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GenId(pub usize);

/// `d^order f` for the generator `f = gen`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GenVar {
    pub gen: GenId,
    pub order: u32,
}

/// Power product of generator variables. Powers are positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GenMono(BTreeMap<GenVar, u32>);

impl GenMono {
    pub fn one() -> Self {
        GenMono(BTreeMap::new())
    }

    pub fn var(v: GenVar) -> Self {
        GenMono(BTreeMap::from([(v, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GenVar, &u32)> {
        self.0.iter()
    }

    pub fn power(&self, v: &GenVar) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &GenMono) -> GenMono {
        let mut out = self.0.clone();
        for (v, p) in &other.0 {
            *out.entry(*v).or_insert(0) += p;
        }
        GenMono(out)
    }

    /// `self / other` when every power suffices.
    pub fn div(&self, other: &GenMono) -> Option<GenMono> {
        let mut out = self.0.clone();
        for (v, p) in &other.0 {
            let have = out.get_mut(v)?;
            match (*have).cmp(p) {
                Ordering::Less => return None,
                Ordering::Equal => {
                    out.remove(v);
                }
                Ordering::Greater => *have -= p,
            }
        }
        Some(GenMono(out))
    }

    /// Removes one factor `v`.
    pub fn without_one(&self, v: &GenVar) -> GenMono {
        let mut out = self.0.clone();
        match out.get_mut(v) {
            Some(p) if *p > 1 => *p -= 1,
            Some(_) => {
                out.remove(v);
            }
            None => panic!("variable not present"),
        }
        GenMono(out)
    }

    /// Splits into the factors accepted by `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&GenVar) -> bool) -> (GenMono, GenMono) {
        let (a, b): (BTreeMap<_, _>, BTreeMap<_, _>) = self.0.iter().partition(|(v, _)| pred(v));
        (GenMono(a), GenMono(b))
    }

    pub fn gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.0.keys().map(|v| v.gen)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }
}

impl Ord for GenMono {
    /// Lexicographic with the largest variable most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev().peekable();
        let mut b = other.0.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, pa)), Some((vb, pb))) => match va.cmp(vb) {
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Less => return Ordering::Less,
                    Ordering::Equal => match pa.cmp(pb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for GenMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `b^{-exps} * gens`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub exps: ExponentVector,
    pub gens: GenMono,
}

impl Mono {
    pub fn new(exps: ExponentVector, gens: GenMono) -> Self {
        Mono { exps, gens }
    }

    pub fn one(n: usize) -> Self {
        Mono { exps: ExponentVector::zeros(n), gens: GenMono::one() }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_zero() && self.gens.is_one()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono { exps: &self.exps + &other.exps, gens: self.gens.mul(&other.gens) }
    }

    pub fn div(&self, other: &Mono) -> Option<Mono> {
        Some(Mono { exps: &self.exps - &other.exps, gens: self.gens.div(&other.gens)? })
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps).then_with(|| self.gens.cmp(&other.gens))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial in basis monomials, polynomial in generator
/// variables. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly(BTreeMap<Mono, BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn term(c: BigRational, m: Mono) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        Self::term(c, Mono::one(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.0.iter()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.0.iter().next_back()
    }

    pub fn lowest(&self) -> Option<(&Mono, &BigRational)> {
        self.0.iter().next()
    }

    /// The single monomial, if there is exactly one term.
    pub fn as_single(&self) -> Option<(&Mono, &BigRational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_single() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn has_gens(&self) -> bool {
        self.0.keys().any(|m| !m.gens.is_one())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn mul_term(&self, m: &Mono, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(n, c)| (n.mul(m), c * k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            for (n, d) in &other.0 {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let n = self.0.keys().next().map_or(0, |m| m.exps.len());
        (0..k).fold(Poly::constant(n, BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Exact quotient, if `divisor` divides `self` with a Laurent polynomial
    /// quotient.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (dl, dc) = divisor.leading()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (dlow, _) = divisor.lowest()?;
        let (slow, _) = self.lowest()?;
        let floor = slow.div(dlow)?;
        let (sbox, dbox) = (self.degree_box(), divisor.degree_box());
        let bounds: Vec<(ExponentScalar, ExponentScalar)> = sbox
            .iter()
            .zip(&dbox)
            .map(|((slo, shi), (dlo, dhi))| {
                (
                    ExponentScalar::from(slo.as_rational() - dlo.as_rational()),
                    ExponentScalar::from(shi.as_rational() - dhi.as_rational()),
                )
            })
            .collect();
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        for _ in 0..4096 {
            let Some((rl, rc)) = rem.leading() else {
                return Some(quot);
            };
            let t = rl.div(dl)?;
            if t < floor || !within(&degrees(&t), &bounds) {
                return None;
            }
            let k = rc / dc;
            rem = rem.sub(&divisor.mul_term(&t, &k));
            quot.add_term(t, k);
        }
        None
    }

    /// Least and greatest value of each basis exponent and of the total
    /// generator degree over the support. Both add under multiplication.
    fn degree_box(&self) -> Vec<(ExponentScalar, ExponentScalar)> {
        let mut out: Vec<(ExponentScalar, ExponentScalar)> = Vec::new();
        for (m, _) in self.terms() {
            let ds = degrees(m);
            if out.is_empty() {
                out = ds.into_iter().map(|d| (d.clone(), d)).collect();
                continue;
            }
            for ((lo, hi), d) in out.iter_mut().zip(ds) {
                if d < *lo {
                    *lo = d;
                } else if d > *hi {
                    *hi = d;
                }
            }
        }
        out
    }

    /// Applies `f` to every monomial, merging collisions.
    pub fn map_monos(&self, f: impl Fn(&Mono) -> Mono) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            out.add_term(f(m), c.clone());
        }
        out
    }
}

fn degrees(m: &Mono) -> Vec<ExponentScalar> {
    let mut out = m.exps.coords().to_vec();
    out.push(ExponentScalar::int(i64::from(m.gens.degree())));
    out
}

fn within(ds: &[ExponentScalar], bounds: &[(ExponentScalar, ExponentScalar)]) -> bool {
    ds.iter().zip(bounds).all(|(d, (lo, hi))| lo <= d && d <= hi)
}

/// A fraction `num / den` in canonical form: a one-term denominator without
/// generators is folded into the numerator, and the denominator is monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Element {
    num: Poly,
    den: Poly,
}

impl Element {
    /// `num / den`, canonicalized.
    pub fn fraction(num: Poly, den: Poly) -> Result<Element> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(n: usize, p: Poly) -> Element {
        Element { num: p, den: Poly::constant(n, BigRational::one()) }
    }

    pub fn constant(n: usize, c: BigRational) -> Element {
        Element { num: Poly::constant(n, c), den: Poly::constant(n, BigRational::one()) }
    }

    pub fn zero(n: usize) -> Element {
        Element { num: Poly::zero(), den: Poly::constant(n, BigRational::one()) }
    }

    pub fn one(n: usize) -> Element {
        Self::constant(n, BigRational::one())
    }

    pub fn mono(c: BigRational, m: Mono) -> Element {
        let n = m.exps.len();
        Element { num: Poly::term(c, m), den: Poly::constant(n, BigRational::one()) }
    }

    fn canonical(mut num: Poly, mut den: Poly) -> Element {
        let n = den.terms().next().map_or(0, |(m, _)| m.exps.len());
        if num.is_zero() {
            return Element::zero(n);
        }
        if let Some((m, c)) = den.as_single() {
            if m.gens.is_one() {
                let inv = Mono::new(-&m.exps, GenMono::one());
                let k = c.recip();
                return Element { num: num.mul_term(&inv, &k), den: Poly::constant(n, BigRational::one()) };
            }
        }
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let k = lc.recip();
            num = num.scale(&k);
            den = den.scale(&k);
        }
        if let Some(q) = num.exact_div(&den) {
            return Element { num: q, den: Poly::constant(n, BigRational::one()) };
        }
        Element { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Basis size these exponent vectors use.
    pub fn dim(&self) -> usize {
        self.den.terms().next().map_or(0, |(m, _)| m.exps.len())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn has_gens(&self) -> bool {
        self.num.has_gens() || self.den.has_gens()
    }

    pub fn gens(&self) -> impl Iterator<Item = GenVar> + '_ {
        self.num.terms().chain(self.den.terms()).flat_map(|(m, _)| m.gens.iter().map(|(v, _)| *v))
    }

    pub fn add(&self, other: &Element) -> Element {
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        if other.den.is_one() {
            return Self::canonical(self.num.add(&other.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Self::canonical(other.num.add(&self.num.mul(&other.den)), other.den.clone());
        }
        if let Some(k) = other.den.exact_div(&self.den) {
            return Self::canonical(self.num.mul(&k).add(&other.num), other.den.clone());
        }
        if let Some(k) = self.den.exact_div(&other.den) {
            return Self::canonical(other.num.mul(&k).add(&self.num), self.den.clone());
        }
        Self::canonical(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Element {
        Element { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Element {
        if k.is_zero() {
            return Element::zero(self.dim());
        }
        Element { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Element) -> Element {
        if self.is_zero() || other.is_zero() {
            return Element::zero(self.dim().max(other.dim()));
        }
        if self.den.is_one() && other.den.is_one() {
            return Element { num: self.num.mul(&other.num), den: self.den.clone() };
        }
        if self.den == other.num && other.den.is_one() {
            return Element::from_poly(self.dim(), self.num.clone());
        }
        let (mut a, mut b) = (self.num.clone(), other.num.clone());
        let (mut da, mut db) = (self.den.clone(), other.den.clone());
        if let Some(q) = a.exact_div(&db) {
            a = q;
            db = Poly::constant(self.dim(), BigRational::one());
        }
        if let Some(q) = b.exact_div(&da) {
            b = q;
            da = Poly::constant(self.dim(), BigRational::one());
        }
        Self::canonical(a.mul(&b), da.mul(&db))
    }

    /// Multiplies by a single monomial term.
    pub fn mul_term(&self, m: &Mono, k: &BigRational) -> Element {
        Self::canonical(self.num.mul_term(m, k), self.den.clone())
    }

    /// Syntactic inverse. Callers wanting a semantic check use the tower.
    pub fn inv(&self) -> Result<Element> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Element) -> Result<Element> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Element> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Element::one(self.dim());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Applies a monomial map to numerator and denominator.
    pub fn map_monos(&self, f: impl Fn(&Mono) -> Mono) -> Element {
        Self::canonical(self.num.map_monos(&f), self.den.map_monos(&f))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{}", m.exps)?;
            for (v, p) in m.gens.iter() {
                write!(f, "*g{}'{}^{p}", v.gen.0, v.order)?;
            }
        }
        Ok(())
    }
}

/// Exponent for `b_i^{power}`.
pub fn basis_power(n: usize, index: usize, power: ExponentScalar) -> Mono {
    Mono::new(ExponentVector::unit(n, index, -power), GenMono::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn x(p: i64) -> Element {
        Element::mono(q(1), basis_power(2, 0, ExponentScalar::int(p)))
    }

    fn ex(p: i64) -> Element {
        Element::mono(q(1), basis_power(2, 1, ExponentScalar::int(p)))
    }

    #[test]
    fn base_cancellations() {
        let b = x(1);
        assert!(b.mul(&b).sub(&x(2)).is_zero());
        assert!(!x(1).mul(&ex(-1)).is_zero());
        let one = Element::one(2);
        let f = one.sub(&x(-1));
        let r = f.mul(&f.inv().unwrap()).sub(&one);
        assert!(r.is_zero());
    }

    #[test]
    fn fractions_fold_monomial_denominators() {
        let e = Element::one(2).div(&x(2).scale(&q(3))).unwrap();
        assert!(e.is_polynomial());
        assert_eq!(e, x(-2).scale(&BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn exact_division() {
        let a = Element::one(2).sub(&x(-1));
        let b = Element::one(2).add(&x(-1));
        let prod = a.mul(&b);
        assert_eq!(prod.num().exact_div(a.num()).unwrap(), *b.num());
        assert!(a.num().exact_div(b.num()).is_none());
        let q = prod.div(&a).unwrap();
        assert_eq!(q, b);
    }

    #[test]
    fn monomial_order_is_multiplicative() {
        let g = GenVar { gen: GenId(0), order: 0 };
        let dg = GenVar { gen: GenId(0), order: 1 };
        let a = GenMono::var(g).mul(&GenMono::var(g));
        let b = GenMono::var(dg);
        assert!(a < b);
        assert!(a.mul(&GenMono::var(g)) < b.mul(&GenMono::var(g)));
    }
}
