//! Pull-based memoized series `sum c_i z^{e_i}` with grid certificates.
//!
//! Arithmetic produces raw streams: exponents strictly increase but
//! coefficients may be zero. [`LazySeries::normalized`] filters with the
//! coefficient domain's zero test.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order_core::{
    flat_compare, CombineMode, ExponentScalar, ExponentVector, ExtendedValuation, FlatRelation, GridCertificate,
};

/// An effective coefficient field: exact arithmetic plus a zero test.
pub trait CoeffDomain: Clone + 'static {
    type Coeff: Clone + fmt::Debug + 'static;

    fn zero(&self) -> Self::Coeff;
    fn one(&self) -> Self::Coeff;
    fn add(&self, a: &Self::Coeff, b: &Self::Coeff) -> Self::Coeff;
    fn neg(&self, a: &Self::Coeff) -> Self::Coeff;
    fn mul(&self, a: &Self::Coeff, b: &Self::Coeff) -> Self::Coeff;
    fn inv(&self, a: &Self::Coeff) -> Result<Self::Coeff>;
    fn is_zero(&self, a: &Self::Coeff) -> Result<bool>;
    fn embed_rational(&self, r: &BigRational) -> Self::Coeff;

    fn sub(&self, a: &Self::Coeff, b: &Self::Coeff) -> Self::Coeff {
        self.add(a, &self.neg(b))
    }
}

/// Exact rationals with the obvious zero test.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalDomain;

impl CoeffDomain for RationalDomain {
    type Coeff = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> Result<bool> {
        Ok(a.is_zero())
    }
    fn embed_rational(&self, r: &BigRational) -> BigRational {
        r.clone()
    }
}

/// One term `coeff * z^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<C> {
    pub coeff: C,
    pub exponent: ExponentScalar,
}

impl<C> Term<C> {
    pub fn new(coeff: C, exponent: ExponentScalar) -> Self {
        Term { coeff, exponent }
    }
}

type Step<D> = Result<Option<(Term<<D as CoeffDomain>::Coeff>, LazySeries<D>)>>;
type Thunk<D> = Box<dyn FnOnce() -> Step<D>>;
type TermMap<C> = Rc<dyn Fn(&Term<C>) -> Result<C>>;
type CoeffMap<C, E> = Rc<dyn Fn(&C) -> Result<E>>;

enum Cell<D: CoeffDomain> {
    Pending(Thunk<D>),
    Forcing,
    Forced(Step<D>),
}

/// A lazily generated series in one variable `z`.
pub struct LazySeries<D: CoeffDomain> {
    node: Rc<RefCell<Cell<D>>>,
    cert: Rc<GridCertificate>,
    domain: D,
}

impl<D: CoeffDomain> Clone for LazySeries<D> {
    fn clone(&self) -> Self {
        LazySeries { node: Rc::clone(&self.node), cert: Rc::clone(&self.cert), domain: self.domain.clone() }
    }
}

impl<D: CoeffDomain> fmt::Debug for LazySeries<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let state = match &*self.node.borrow() {
            Cell::Pending(_) => "pending",
            Cell::Forcing => "forcing",
            Cell::Forced(_) => "forced",
        };
        write!(f, "LazySeries({state}, cert offset {})", self.cert.offset())
    }
}

fn scalar_vec(e: &ExponentScalar) -> ExponentVector {
    ExponentVector::new(vec![e.clone()])
}

fn expect_1d<T>(r: Result<T>) -> T {
    r.expect("one-dimensional certificates enumerate finitely")
}

/// Relations decided by [`LazySeries::cmp_asymptotic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `f = o(g)`
    Prec,
    /// `f = O(g)`
    PrecEq,
    /// `f = O(g)` and `g = O(f)`
    Asymp,
    /// `f - g = o(g)`
    Sim,
    /// Flat little-o on valuations.
    FlatPrec,
    /// Flat big-O on valuations.
    FlatPrecEq,
}

/// A certificate for a finite sorted exponent list.
pub fn finite_certificate(exponents: &[ExponentScalar]) -> GridCertificate {
    match exponents.iter().min() {
        None => GridCertificate::point(ExponentVector::zeros(1)),
        Some(min) => {
            let gens = exponents.iter().filter(|e| *e > min).map(|e| scalar_vec(&(e - min))).collect();
            GridCertificate::new(gens, scalar_vec(min)).expect("differences are positive")
        }
    }
}

impl<D: CoeffDomain> LazySeries<D> {
    /// A series from a thunk. The thunk must only emit exponents inside
    /// `cert`, in strictly increasing order.
    pub fn lazy(domain: D, cert: GridCertificate, thunk: impl FnOnce() -> Step<D> + 'static) -> Self {
        LazySeries { node: Rc::new(RefCell::new(Cell::Pending(Box::new(thunk)))), cert: Rc::new(cert), domain }
    }

    fn forced(domain: D, cert: Rc<GridCertificate>, step: Step<D>) -> Self {
        LazySeries { node: Rc::new(RefCell::new(Cell::Forced(step))), cert, domain }
    }

    pub fn zero(domain: D) -> Self {
        Self::forced(domain, Rc::new(GridCertificate::point(ExponentVector::zeros(1))), Ok(None))
    }

    /// A stream that fails with `err` when forced.
    pub fn failing(domain: D, err: Error) -> Self {
        Self::forced(domain, Rc::new(GridCertificate::point(ExponentVector::zeros(1))), Err(err))
    }

    pub fn monomial(domain: D, coeff: D::Coeff, exponent: ExponentScalar) -> Self {
        Self::from_terms(domain, vec![Term::new(coeff, exponent)])
    }

    pub fn constant(domain: D, coeff: D::Coeff) -> Self {
        Self::monomial(domain, coeff, ExponentScalar::zero())
    }

    /// A finite series. Equal exponents are merged; zero coefficients kept.
    pub fn from_terms(domain: D, mut terms: Vec<Term<D::Coeff>>) -> Self {
        terms.sort_by(|a, b| a.exponent.cmp(&b.exponent));
        let mut merged: Vec<Term<D::Coeff>> = Vec::new();
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exponent == t.exponent => {
                    last.coeff = domain.add(&last.coeff, &t.coeff);
                }
                _ => merged.push(t),
            }
        }
        let exps: Vec<_> = merged.iter().map(|t| t.exponent.clone()).collect();
        let cert = Rc::new(finite_certificate(&exps));
        let mut acc = Self::forced(domain.clone(), Rc::clone(&cert), Ok(None));
        for t in merged.into_iter().rev() {
            acc = Self::forced(domain.clone(), Rc::clone(&cert), Ok(Some((t, acc))));
        }
        acc
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn cert(&self) -> &GridCertificate {
        &self.cert
    }

    /// Same stream, looser certificate.
    pub fn with_cert(&self, cert: GridCertificate) -> Self {
        LazySeries { node: Rc::clone(&self.node), cert: Rc::new(cert), domain: self.domain.clone() }
    }

    /// First raw term and the rest. Memoized: later calls return the same
    /// objects.
    pub fn head(&self) -> Step<D> {
        if let Cell::Forced(step) = &*self.node.borrow() {
            return step.clone();
        }
        let prev = std::mem::replace(&mut *self.node.borrow_mut(), Cell::Forcing);
        let thunk = match prev {
            Cell::Pending(t) => t,
            Cell::Forcing => return Err(Error::Contract("lazy stream forced itself before producing a term".into())),
            Cell::Forced(_) => unreachable!(),
        };
        let step = thunk();
        *self.node.borrow_mut() = Cell::Forced(step.clone());
        step
    }

    /// Does this handle share its memo cell with `other`?
    pub fn same_cell(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.node, &other.node)
    }

    /// Iterator over raw terms.
    pub fn raw_terms(&self) -> RawTerms<D> {
        RawTerms { cur: Some(self.clone()) }
    }

    /// Raw terms with exponent `< bound`.
    pub fn raw_terms_below(&self, bound: &ExponentScalar) -> Result<Vec<Term<D::Coeff>>> {
        let mut out = Vec::new();
        for t in self.raw_terms() {
            let t = t?;
            if t.exponent >= *bound {
                break;
            }
            out.push(t);
        }
        Ok(out)
    }

    /// Nonzero terms with exponent `< bound`.
    pub fn terms_below(&self, bound: &ExponentScalar) -> Result<Vec<Term<D::Coeff>>> {
        let mut out = Vec::new();
        for t in self.raw_terms_below(bound)? {
            if !self.domain.is_zero(&t.coeff)? {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// Checks that every raw exponent `<= bound` lies in the certificate.
    pub fn respects_certificate(&self, bound: &ExponentScalar) -> Result<bool> {
        for t in self.raw_terms() {
            let t = t?;
            if t.exponent > *bound {
                break;
            }
            if !self.cert.contains(&scalar_vec(&t.exponent))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn add(&self, other: &Self) -> Self {
        let cert = expect_1d(self.cert.combine(&other.cert, CombineMode::Union));
        let (f, g) = (self.clone(), other.clone());
        let d = self.domain.clone();
        Self::lazy(self.domain.clone(), cert, move || {
            Ok(match (f.head()?, g.head()?) {
                (None, None) => None,
                (Some(h), None) | (None, Some(h)) => Some(h),
                (Some((a, fa)), Some((b, gb))) => match a.exponent.cmp(&b.exponent) {
                    Ordering::Less => Some((a, fa.add(&g))),
                    Ordering::Greater => Some((b, f.add(&gb))),
                    Ordering::Equal => {
                        let c = d.add(&a.coeff, &b.coeff);
                        Some((Term::new(c, a.exponent), fa.add(&gb)))
                    }
                },
            })
        })
    }

    pub fn neg(&self) -> Self {
        let d = self.domain.clone();
        self.map_coeffs(move |t| Ok(d.neg(&t.coeff)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `c z^shift f`.
    pub fn scale(&self, c: &D::Coeff, shift: &ExponentScalar) -> Self {
        let cert = self.cert.shifted(&scalar_vec(shift));
        let (f, c, shift) = (self.clone(), c.clone(), shift.clone());
        let d = self.domain.clone();
        Self::lazy(self.domain.clone(), cert, move || {
            Ok(f.head()?.map(|(t, rest)| {
                let term = Term::new(d.mul(&c, &t.coeff), &t.exponent + &shift);
                (term, rest.scale(&c, &shift))
            }))
        })
    }

    /// Replaces each coefficient by `f(term)`, keeping exponents.
    pub fn map_coeffs(&self, f: impl Fn(&Term<D::Coeff>) -> Result<D::Coeff> + 'static) -> Self {
        self.map_coeffs_rc(Rc::new(f))
    }

    fn map_coeffs_rc(&self, f: TermMap<D::Coeff>) -> Self {
        let s = self.clone();
        Self::lazy(self.domain.clone(), (*self.cert).clone(), move || {
            Ok(match s.head()? {
                None => None,
                Some((t, rest)) => {
                    let c = f(&t)?;
                    Some((Term::new(c, t.exponent), rest.map_coeffs_rc(f)))
                }
            })
        })
    }

    /// The same exponents with each coefficient carried into `domain`.
    pub fn map_into<E: CoeffDomain>(
        &self,
        domain: E,
        f: impl Fn(&D::Coeff) -> Result<E::Coeff> + 'static,
    ) -> LazySeries<E> {
        self.map_into_rc(domain, Rc::new(f))
    }

    fn map_into_rc<E: CoeffDomain>(&self, domain: E, f: CoeffMap<D::Coeff, E::Coeff>) -> LazySeries<E> {
        let s = self.clone();
        let next_domain = domain.clone();
        LazySeries::lazy(domain, (*self.cert).clone(), move || {
            Ok(match s.head()? {
                None => None,
                Some((t, rest)) => {
                    let c = f(&t.coeff)?;
                    Some((Term::new(c, t.exponent), rest.map_into_rc(next_domain, f)))
                }
            })
        })
    }

    /// Keeps raw terms whose exponent satisfies `keep`.
    pub fn filter_exponents(&self, keep: impl Fn(&ExponentScalar) -> bool + 'static) -> Self {
        self.filter_rc(Rc::new(keep))
    }

    fn filter_rc(&self, keep: Rc<dyn Fn(&ExponentScalar) -> bool>) -> Self {
        let s = self.clone();
        Self::lazy(self.domain.clone(), (*self.cert).clone(), move || {
            let mut cur = s;
            loop {
                match cur.head()? {
                    None => return Ok(None),
                    Some((t, rest)) => {
                        if keep(&t.exponent) {
                            return Ok(Some((t, rest.filter_rc(keep))));
                        }
                        cur = rest;
                    }
                }
            }
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cert = expect_1d(self.cert.combine(&other.cert, CombineMode::Minkowski));
        let (f, g) = (self.clone(), other.clone());
        let d = self.domain.clone();
        Self::lazy(self.domain.clone(), cert, move || {
            Ok(match (f.head()?, g.head()?) {
                (Some((a, fa)), Some((b, gb))) => {
                    let head = Term::new(d.mul(&a.coeff, &b.coeff), &a.exponent + &b.exponent);
                    let tail = gb.scale(&a.coeff, &a.exponent).add(&fa.mul(&g));
                    Some((head, tail))
                }
                _ => None,
            })
        })
    }

    /// Drops leading terms at exponents `<= 0` after checking they vanish.
    fn strip_nonpositive(&self) -> Result<Self> {
        let mut cur = self.clone();
        loop {
            match cur.head()? {
                Some((t, rest)) if !t.exponent.is_positive() => {
                    if !self.domain.is_zero(&t.coeff)? {
                        return Err(Error::NotInfinitesimal);
                    }
                    cur = rest;
                }
                _ => return Ok(cur),
            }
        }
    }

    /// `1 / (1 - g)` for infinitesimal `g`, defined by `h = 1 + g h`.
    pub fn invert_one_minus(&self) -> Result<Self> {
        let g = self.strip_nonpositive()?;
        let gens = expect_1d(g.cert.positive_part_generators());
        let cert = GridCertificate::new(gens, ExponentVector::zeros(1)).expect("positive part generators are positive");
        let slot: Rc<RefCell<Option<Self>>> = Rc::new(RefCell::new(None));
        let slot_in = Rc::clone(&slot);
        let tail = Self::lazy(self.domain.clone(), cert.clone(), move || {
            let h = slot_in.borrow().clone().expect("self reference is set before forcing");
            g.mul(&h).head()
        });
        let one = Term::new(self.domain.one(), ExponentScalar::zero());
        let h = Self::forced(self.domain.clone(), Rc::new(cert), Ok(Some((one, tail))));
        *slot.borrow_mut() = Some(h.clone());
        Ok(h)
    }

    /// First term with a nonzero coefficient, and the stream after it.
    pub fn leading_term(&self) -> Result<Option<(Term<D::Coeff>, Self)>> {
        let mut cur = self.clone();
        loop {
            match cur.head()? {
                None => return Ok(None),
                Some((t, rest)) => {
                    if !self.domain.is_zero(&t.coeff)? {
                        return Ok(Some((t, rest)));
                    }
                    cur = rest;
                }
            }
        }
    }

    /// `f^{-1} = c^{-1} z^{-a} / (1 - g)` where `f = c z^a (1 - g)`.
    pub fn inverse(&self) -> Result<Self> {
        let Some((lead, rest)) = self.leading_term()? else {
            return Err(Error::DivisionByZero);
        };
        let c_inv = self.domain.inv(&lead.coeff)?;
        let shift = -&lead.exponent;
        let g = rest.scale(&self.domain.neg(&c_inv), &shift);
        Ok(g.invert_one_minus()?.scale(&c_inv, &shift))
    }

    /// Filters zero coefficients and merges equal exponents.
    pub fn normalized(&self) -> Self {
        let s = self.clone();
        let d = self.domain.clone();
        Self::lazy(self.domain.clone(), (*self.cert).clone(), move || {
            let mut cur = s;
            loop {
                let Some((mut t, mut rest)) = cur.head()? else {
                    return Ok(None);
                };
                while let Some((u, more)) = rest.head()? {
                    if u.exponent != t.exponent {
                        break;
                    }
                    t.coeff = d.add(&t.coeff, &u.coeff);
                    rest = more;
                }
                if !d.is_zero(&t.coeff)? {
                    return Ok(Some((t, rest.normalized())));
                }
                cur = rest;
            }
        })
    }

    /// Exponent of the first nonzero coefficient. Loops forever on a series
    /// that is zero but has infinitely many raw terms, so callers must know
    /// the series is nonzero.
    pub fn valuation_of_nonzero(&self) -> Result<ExponentScalar> {
        match self.leading_term()? {
            Some((t, _)) => Ok(t.exponent),
            None => Err(Error::Contract("the zero series has no finite valuation".into())),
        }
    }

    /// First nonzero term at exponent `<= bound`, or `None` if all
    /// coefficients up to the bound vanish. Always terminates.
    pub fn first_nonzero_below(&self, bound: &ExponentScalar) -> Result<Option<Term<D::Coeff>>> {
        for t in self.raw_terms() {
            let t = t?;
            if t.exponent > *bound {
                break;
            }
            if !self.domain.is_zero(&t.coeff)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    pub fn valuation_below(&self, bound: &ExponentScalar) -> Result<Option<ExponentScalar>> {
        Ok(self.first_nonzero_below(bound)?.map(|t| t.exponent))
    }

    /// The raw coefficient at `exponent`.
    pub fn coefficient(&self, exponent: &ExponentScalar) -> Result<D::Coeff> {
        let mut acc = self.domain.zero();
        for t in self.raw_terms() {
            let t = t?;
            match t.exponent.cmp(exponent) {
                Ordering::Less => continue,
                Ordering::Equal => acc = self.domain.add(&acc, &t.coeff),
                Ordering::Greater => break,
            }
        }
        Ok(acc)
    }

    /// `f = up + constant + down` with `up` on negative exponents and `down`
    /// on positive ones.
    pub fn canonical_decompose(&self) -> Result<(Self, D::Coeff, Self)> {
        let mut up = Vec::new();
        let mut constant = self.domain.zero();
        let mut cur = self.clone();
        loop {
            match cur.head()? {
                Some((t, rest)) if !t.exponent.is_positive() => {
                    if t.exponent.is_zero() {
                        constant = self.domain.add(&constant, &t.coeff);
                    } else {
                        up.push(t);
                    }
                    cur = rest;
                }
                _ => break,
            }
        }
        let down = cur.with_cert((*self.cert).clone());
        Ok((Self::from_terms(self.domain.clone(), up), constant, down))
    }

    pub fn cmp_asymptotic(&self, other: &Self, relation: Relation) -> Result<bool> {
        let vg = other.valuation_of_nonzero()?;
        Ok(match relation {
            Relation::Prec => self.valuation_below(&vg)?.is_none(),
            Relation::PrecEq => self.valuation_below(&vg)?.is_none_or(|v| v == vg),
            Relation::Asymp => self.valuation_below(&vg)? == Some(vg),
            Relation::Sim => self.sub(other).valuation_below(&vg)?.is_none(),
            Relation::FlatPrec | Relation::FlatPrecEq => {
                let vf = ExtendedValuation::Finite(scalar_vec(&self.valuation_of_nonzero()?));
                let rel = flat_compare(&vf, &ExtendedValuation::Finite(scalar_vec(&vg)));
                match relation {
                    Relation::FlatPrec => rel == FlatRelation::LittleO,
                    _ => rel != FlatRelation::Neither,
                }
            }
        })
    }
}

/// Iterator over the raw terms of a series.
pub struct RawTerms<D: CoeffDomain> {
    cur: Option<LazySeries<D>>,
}

impl<D: CoeffDomain> Iterator for RawTerms<D> {
    type Item = Result<Term<D::Coeff>>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.cur.take()?;
        match cur.head() {
            Ok(None) => None,
            Ok(Some((t, rest))) => {
                self.cur = Some(rest);
                Some(Ok(t))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type S = LazySeries<RationalDomain>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn e(n: i64) -> ExponentScalar {
        ExponentScalar::int(n)
    }

    fn poly(cs: &[(i64, ExponentScalar)]) -> S {
        S::from_terms(RationalDomain, cs.iter().map(|(c, x)| Term::new(q(*c), x.clone())).collect())
    }

    fn nonzero(s: &S, bound: i64) -> Vec<(BigRational, ExponentScalar)> {
        s.terms_below(&e(bound)).unwrap().into_iter().map(|t| (t.coeff, t.exponent)).collect()
    }

    fn geometric() -> S {
        poly(&[(1, e(1))]).invert_one_minus().unwrap()
    }

    #[test]
    fn head_tail_basics() {
        assert!(S::zero(RationalDomain).head().unwrap().is_none());
        let (t, rest) = geometric().head().unwrap().unwrap();
        assert_eq!((t.coeff, t.exponent), (q(1), e(0)));
        assert_eq!(nonzero(&rest, 3), vec![(q(1), e(1)), (q(1), e(2))]);
    }

    #[test]
    fn memoized_heads_are_shared() {
        let g = geometric();
        let a = g.head().unwrap().unwrap().1;
        let b = g.head().unwrap().unwrap().1;
        assert!(a.same_cell(&b));
    }

    #[test]
    fn products_cancel_raw() {
        let p = poly(&[(1, e(0)), (1, e(1))]).mul(&poly(&[(1, e(0)), (-1, e(1))]));
        let raw: Vec<_> = p.raw_terms().map(|t| t.unwrap()).collect();
        assert_eq!(raw.len(), 3);
        assert_eq!(raw[1].coeff, q(0));
        assert_eq!(nonzero(&p, 10), vec![(q(1), e(0)), (q(-1), e(2))]);
    }

    #[test]
    fn geometric_times_one_minus_z() {
        let p = geometric().mul(&poly(&[(1, e(0)), (-1, e(1))]));
        let (t, tail) = p.leading_term().unwrap().unwrap();
        assert_eq!((t.coeff, t.exponent), (q(1), e(0)));
        // The tail is identically zero; bounded valuation search confirms it
        // to order 6 without looping.
        assert_eq!(tail.valuation_below(&e(6)).unwrap(), None);
        let oracle = truncated_mul(&vec![q(1); 7], &[q(1), q(-1), q(0), q(0), q(0), q(0), q(0)]);
        assert_eq!(oracle, vec![q(1), q(0), q(0), q(0), q(0), q(0), q(0)]);
    }

    fn truncated_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().min(b.len());
        (0..n).map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum()).collect()
    }

    #[test]
    fn inverse_examples() {
        let inv = poly(&[(2, e(-1))]).inverse().unwrap();
        assert_eq!(nonzero(&inv, 10), vec![(BigRational::new(1.into(), 2.into()), e(1))]);
        assert_eq!(S::zero(RationalDomain).inverse().err(), Some(Error::DivisionByZero));
        assert_eq!(poly(&[(1, e(0))]).invert_one_minus().err(), Some(Error::NotInfinitesimal));
    }

    /// 1/(1 - z - z^{3/2}) checked by undetermined coefficients on the grid
    /// a + 3b/2.
    #[test]
    fn inverse_with_rational_exponents() {
        let h = ExponentScalar::ratio(3, 2);
        let f = S::from_terms(
            RationalDomain,
            vec![Term::new(q(1), e(0)), Term::new(q(-1), e(1)), Term::new(q(-1), h.clone())],
        );
        let inv = f.inverse().unwrap();
        let got = inv.terms_below(&e(3)).unwrap();
        // c(e) = c(e-1) + c(e-3/2), c(0) = 1, on half-integers.
        let mut c: std::collections::BTreeMap<i64, BigRational> = std::collections::BTreeMap::new();
        for k in 0..6i64 {
            let mut v = if k == 0 { q(1) } else { q(0) };
            if k >= 2 {
                v += c[&(k - 2)].clone();
            }
            if k >= 3 {
                v += c[&(k - 3)].clone();
            }
            c.insert(k, v);
        }
        let expected: Vec<_> =
            c.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (v.clone(), ExponentScalar::ratio(*k, 2))).collect();
        let got: Vec<_> = got.into_iter().map(|t| (t.coeff, t.exponent)).collect();
        assert_eq!(got, expected);
        assert_eq!(got[..5].iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(), vec![q(1), q(1), q(1), q(1), q(2)]);
        assert!(inv.respects_certificate(&e(6)).unwrap());
    }

    #[test]
    fn valuation_queries() {
        assert_eq!(geometric().valuation_of_nonzero().unwrap(), e(0));
        let z0 = S::zero(RationalDomain).with_cert(GridCertificate::scalar(&[e(1)], e(5)).unwrap());
        assert_eq!(z0.valuation_below(&e(3)).unwrap(), None);
        assert_eq!(poly(&[(1, e(2)), (1, e(5))]).valuation_below(&e(3)).unwrap(), Some(e(2)));
    }

    #[test]
    fn decomposition() {
        let f = poly(&[(1, e(-1)), (-3, e(0)), (1, e(1))]);
        let (up, c, down) = f.canonical_decompose().unwrap();
        assert_eq!(nonzero(&up, 10), vec![(q(1), e(-1))]);
        assert_eq!(c, q(-3));
        assert_eq!(nonzero(&down, 10), vec![(q(1), e(1))]);

        let (up, c, down) = geometric().canonical_decompose().unwrap();
        assert!(nonzero(&up, 10).is_empty());
        assert_eq!(c, q(1));
        assert_eq!(nonzero(&down, 3), vec![(q(1), e(1)), (q(1), e(2))]);
    }

    #[test]
    fn asymptotic_relations() {
        let z = poly(&[(1, e(1))]);
        let two_z = poly(&[(2, e(1))]);
        assert!(two_z.cmp_asymptotic(&z, Relation::Asymp).unwrap());
        assert!(!two_z.cmp_asymptotic(&z, Relation::Sim).unwrap());
        let one_plus_z = poly(&[(1, e(0)), (1, e(1))]);
        let one = poly(&[(1, e(0))]);
        assert!(one_plus_z.cmp_asymptotic(&one, Relation::Sim).unwrap());
        assert!(z.cmp_asymptotic(&one, Relation::Prec).unwrap());
        assert!(z.cmp_asymptotic(&one, Relation::PrecEq).unwrap());
        assert!(!one.cmp_asymptotic(&z, Relation::PrecEq).unwrap());
    }
}
