//! Effective differential ambient fields over a transbasis.
//!
//! A [`Tower`] owns a validated basis, the logarithmic derivatives
//! `lambda_i = d_1 b_i / b_i`, and the generators adjoined as distinguished
//! solutions of quasi-linear equations. [`Element`]s are plain values; every
//! operation that needs the basis or a zero test goes through the tower.

pub mod element;
mod expand;
mod render;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::One;

pub use element::{Element, GenId, GenMono, GenVar, Mono, Poly};
pub use expand::DominantTerm;
pub use render::{iterated_log_label, RenderMode};

use crate::diffpoly::{DiffMono, DiffPolynomial};
use crate::error::{Error, Result};
use crate::lazy_series::{CoeffDomain, LazySeries};
use crate::order_core::{ExponentScalar, ExponentVector};
use crate::transbasis::Transbasis;

/// Series whose coefficients live one level down in a tower.
pub type SliceSeries = LazySeries<SliceDomain>;

/// An adjoined distinguished solution `f` of a quasi-linear equation.
pub struct Generator {
    name: String,
    equation: DiffPolynomial,
    level: usize,
    trivial: bool,
    streams: RefCell<Vec<SliceSeries>>,
    pub(crate) context: RefCell<Option<Rc<crate::zerotest::Context>>>,
}

impl Generator {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The defining equation `P(f) = 0`.
    pub fn equation(&self) -> &DiffPolynomial {
        &self.equation
    }

    /// Index `m` of the basis element the solution is expanded in.
    pub fn level(&self) -> usize {
        self.level
    }

    /// True when the solution is `0`.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }
}

struct TowerInner {
    basis: Transbasis,
    lambdas: Vec<Element>,
    gens: RefCell<Vec<Rc<Generator>>>,
    expansions: RefCell<HashMap<(Element, usize), SliceSeries>>,
    zero_memo: RefCell<HashMap<Poly, bool>>,
    trace: RefCell<Option<Vec<String>>>,
}

/// A differential ambient field: shared handle, cheap to clone.
#[derive(Clone)]
pub struct Tower(Rc<TowerInner>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower(n = {}, generators = {})", self.dim(), self.0.gens.borrow().len())
    }
}

/// Coefficient domain of expansions: tower elements with the tower's zero
/// test.
#[derive(Clone)]
pub struct SliceDomain {
    tower: Tower,
}

impl SliceDomain {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }
}

impl CoeffDomain for SliceDomain {
    type Coeff = Element;

    fn zero(&self) -> Element {
        self.tower.zero()
    }

    fn one(&self) -> Element {
        self.tower.one()
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        a.add(b)
    }

    fn neg(&self, a: &Element) -> Element {
        a.neg()
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        a.mul(b)
    }

    fn inv(&self, a: &Element) -> Result<Element> {
        a.inv()
    }

    fn is_zero(&self, a: &Element) -> Result<bool> {
        self.tower.zero_test(a)
    }

    fn embed_rational(&self, r: &BigRational) -> Element {
        self.tower.constant(r.clone())
    }
}

/// `-sum alpha_i lambda_i`, the factor with `d_1 b^{-alpha} = factor * b^{-alpha}`.
fn monomial_log_derivative(lambdas: &[Element], exps: &ExponentVector) -> Element {
    let n = exps.len();
    let mut acc = Element::zero(n);
    for (i, a) in exps.coords().iter().enumerate() {
        if !a.is_zero() {
            acc = acc.sub(&lambdas[i].scale(a.as_rational()));
        }
    }
    acc
}

fn derive_poly(lambdas: &[Element], p: &Poly) -> Element {
    let n = lambdas.len();
    let mut out = Poly::zero();
    let mut extra = Element::zero(n);
    for (m, c) in p.terms() {
        if !m.exps.is_zero() {
            let f = monomial_log_derivative(lambdas, &m.exps);
            extra = extra.add(&f.mul_term(m, c));
        }
        for (v, pw) in m.gens.iter() {
            let rest = m.gens.without_one(v);
            let next = GenVar { gen: v.gen, order: v.order + 1 };
            let gens = rest.mul(&GenMono::var(next));
            out.add_term(Mono::new(m.exps.clone(), gens), c * BigRational::from_integer((*pw).into()));
        }
    }
    Element::from_poly(n, out).add(&extra)
}

fn derive_with(lambdas: &[Element], e: &Element) -> Element {
    let n = lambdas.len();
    if e.is_polynomial() {
        return derive_poly(lambdas, e.num());
    }
    let num = Element::from_poly(n, e.num().clone());
    let den = Element::from_poly(n, e.den().clone());
    let top = derive_poly(lambdas, e.num()).mul(&den).sub(&num.mul(&derive_poly(lambdas, e.den())));
    top.div(&den.mul(&den)).expect("denominators are nonzero")
}

/// Logarithmic derivatives of a basis: `lambda_1 = 1`, `lambda_i = d_1 log b_i`.
pub(crate) fn basis_lambdas(basis: &Transbasis) -> Vec<Element> {
    let n = basis.len();
    let mut lambdas: Vec<Element> = Vec::with_capacity(n);
    for i in 0..n {
        let lam = match basis.log_of(i) {
            None => Element::one(n),
            Some(phi) => {
                let mut padded = lambdas.clone();
                padded.resize(n, Element::zero(n));
                derive_with(&padded, phi)
            }
        };
        lambdas.push(lam);
    }
    lambdas
}

impl Tower {
    /// A tower with the monomial base field over `basis` and no generators.
    /// The basis is trusted; use [`Transbasis`] constructors to validate.
    pub fn new(basis: Transbasis) -> Tower {
        let lambdas = basis_lambdas(&basis);
        Tower(Rc::new(TowerInner {
            basis,
            lambdas,
            gens: RefCell::new(Vec::new()),
            expansions: RefCell::new(HashMap::new()),
            zero_memo: RefCell::new(HashMap::new()),
            trace: RefCell::new(None),
        }))
    }

    pub fn basis(&self) -> &Transbasis {
        &self.0.basis
    }

    /// Number of basis elements.
    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    pub fn same(&self, other: &Tower) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    pub fn domain(&self) -> SliceDomain {
        SliceDomain { tower: self.clone() }
    }

    /// `d_1 b_k / b_k` for `k` in `1..=n`.
    pub fn lambda(&self, k: usize) -> &Element {
        &self.0.lambdas[k - 1]
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.dim())
    }

    pub fn one(&self) -> Element {
        Element::one(self.dim())
    }

    pub fn constant(&self, c: BigRational) -> Element {
        Element::constant(self.dim(), c)
    }

    pub fn int(&self, c: i64) -> Element {
        self.constant(BigRational::from_integer(c.into()))
    }

    /// The monomial `b^{-alpha}`.
    pub fn monomial(&self, alpha: &ExponentVector) -> Element {
        Element::mono(BigRational::one(), Mono::new(alpha.clone(), GenMono::one()))
    }

    /// `b_k^p` for `k` in `1..=n`.
    pub fn basis_power(&self, k: usize, p: ExponentScalar) -> Element {
        self.monomial(&ExponentVector::unit(self.dim(), k - 1, -p))
    }

    /// `b_k`.
    pub fn basis_element(&self, k: usize) -> Element {
        self.basis_power(k, ExponentScalar::one())
    }

    /// `b_k^{-1}`, the expansion variable at level `k`.
    pub fn expansion_variable(&self, k: usize) -> Element {
        self.basis_power(k, -ExponentScalar::one())
    }

    /// `log b_k` as an element, for `k >= 2`.
    pub fn log_of_basis(&self, k: usize) -> Option<&Element> {
        self.0.basis.log_of(k - 1)
    }

    pub fn generator(&self, id: GenId) -> Rc<Generator> {
        Rc::clone(&self.0.gens.borrow()[id.0])
    }

    pub fn generator_count(&self) -> usize {
        self.0.gens.borrow().len()
    }

    pub fn generator_by_name(&self, name: &str) -> Option<GenId> {
        self.0.gens.borrow().iter().position(|g| g.name == name).map(GenId)
    }

    /// `d_1^order f` as an element.
    pub fn gen_var(&self, id: GenId, order: u32) -> Element {
        let m = Mono::new(ExponentVector::zeros(self.dim()), GenMono::var(GenVar { gen: id, order }));
        Element::mono(BigRational::one(), m)
    }

    pub fn gen_level(&self, id: GenId) -> usize {
        self.0.gens.borrow()[id.0].level
    }

    /// Adjoins a solution of `equation`. `series` is its expansion at
    /// `level`; `None` marks the trivial solution `0`.
    pub(crate) fn register_generator(
        &self,
        name: &str,
        equation: DiffPolynomial,
        level: usize,
        series: Option<SliceSeries>,
    ) -> GenId {
        let mut gens = self.0.gens.borrow_mut();
        let id = GenId(gens.len());
        let trivial = series.is_none();
        let first = series.unwrap_or_else(|| LazySeries::zero(self.domain()));
        gens.push(Rc::new(Generator {
            name: name.to_string(),
            equation,
            level,
            trivial,
            streams: RefCell::new(vec![first]),
            context: RefCell::new(None),
        }));
        id
    }

    /// Expansion of `d_1^order f` in `b_m^{-1}`, `m` the generator's level.
    pub fn generator_stream(&self, id: GenId, order: u32) -> SliceSeries {
        let gen = self.generator(id);
        if let Some(s) = gen.streams.borrow().get(order as usize) {
            return s.clone();
        }
        let prev = self.generator_stream(id, order - 1);
        let next = crate::diffpoly::derive_series(self, &prev, gen.level);
        let mut streams = gen.streams.borrow_mut();
        while streams.len() <= order as usize {
            streams.push(next.clone());
        }
        streams[order as usize].clone()
    }

    /// Highest basis index or generator level the element involves.
    pub fn level(&self, e: &Element) -> usize {
        let mut lvl = 0;
        for (m, _) in e.num().terms().chain(e.den().terms()) {
            lvl = lvl.max(m.exps.level());
            for g in m.gens.gens() {
                lvl = lvl.max(self.gen_level(g));
            }
        }
        lvl
    }

    /// `d_1 e`.
    pub fn derive(&self, e: &Element) -> Element {
        derive_with(&self.0.lambdas, e)
    }

    /// `d_k e = lambda_k^{-1} d_1 e`.
    pub fn derive_at(&self, e: &Element, k: usize) -> Element {
        let d = self.derive(e);
        if k == 1 {
            return d;
        }
        d.div(self.lambda(k)).expect("basis log-derivatives are nonzero")
    }

    /// `d_1^r e`.
    pub fn derive_n(&self, e: &Element, r: u32) -> Element {
        (0..r).fold(e.clone(), |acc, _| self.derive(&acc))
    }

    /// Semantic inverse: fails on elements that are zero.
    pub fn inv(&self, e: &Element) -> Result<Element> {
        if self.zero_test(e)? {
            return Err(Error::DivisionByZero);
        }
        e.inv()
    }

    pub fn div(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(a.mul(&self.inv(b)?))
    }

    /// Does `e` vanish as a transseries?
    pub fn zero_test(&self, e: &Element) -> Result<bool> {
        self.zero_test_poly(e.num())
    }

    pub fn equal(&self, a: &Element, b: &Element) -> Result<bool> {
        self.zero_test(&a.sub(b))
    }

    fn zero_test_poly(&self, num: &Poly) -> Result<bool> {
        if num.is_zero() {
            return Ok(true);
        }
        if !num.has_gens() {
            return Ok(false);
        }
        if let Some(&r) = self.0.zero_memo.borrow().get(num) {
            return Ok(r);
        }
        let r = self.zero_test_with_generators(num)?;
        self.0.zero_memo.borrow_mut().insert(num.clone(), r);
        Ok(r)
    }

    /// Splits off the highest generator `g` and hands each piece, viewed as
    /// a differential polynomial over the field below `g`, to the zero-test
    /// algorithm in `g`'s context.
    fn zero_test_with_generators(&self, num: &Poly) -> Result<bool> {
        let top = num
            .terms()
            .flat_map(|(m, _)| m.gens.gens().collect::<Vec<_>>())
            .max_by_key(|g| (self.gen_level(*g), *g))
            .expect("polynomial has generators");
        let gen = self.generator(top);
        let lvl = gen.level;
        let mut groups: BTreeMap<ExponentVector, Poly> = BTreeMap::new();
        for (m, c) in num.terms() {
            let lower = m.exps.truncated(lvl);
            let upper = &m.exps - &lower;
            groups.entry(upper).or_default().add_term(Mono::new(lower, m.gens.clone()), c.clone());
        }
        for piece in groups.values() {
            if !self.zero_test_piece(top, &gen, piece)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn zero_test_piece(&self, top: GenId, gen: &Generator, piece: &Poly) -> Result<bool> {
        if gen.trivial {
            let mut rest = Poly::zero();
            for (m, c) in piece.terms() {
                if !m.gens.gens().any(|g| g == top) {
                    rest.add_term(m.clone(), c.clone());
                }
            }
            return self.zero_test_poly(&rest);
        }
        let q = self.as_diff_polynomial(top, piece).pruned(self)?;
        if q.is_zero() {
            return Ok(true);
        }
        if q.is_constant() {
            return Ok(false);
        }
        crate::zerotest::zero_test(self, top, vec![q])
    }

    /// Rewrites a polynomial as a differential polynomial in the generator
    /// `id`, with coefficients free of it.
    pub fn as_diff_polynomial(&self, id: GenId, p: &Poly) -> DiffPolynomial {
        let n = self.dim();
        let mut out: BTreeMap<DiffMono, Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let (mine, rest) = m.gens.split(|v| v.gen == id);
            let mut powers: Vec<u32> = Vec::new();
            for (v, pw) in mine.iter() {
                let j = v.order as usize;
                if powers.len() <= j {
                    powers.resize(j + 1, 0);
                }
                powers[j] += pw;
            }
            out.entry(DiffMono::new(powers)).or_default().add_term(Mono::new(m.exps.clone(), rest), c.clone());
        }
        DiffPolynomial::from_terms(n, out.into_iter().map(|(k, v)| (k, Element::from_poly(n, v))))
    }

    /// Substitutes the generator `id` into a differential polynomial.
    pub fn substitute_generator(&self, p: &DiffPolynomial, id: GenId) -> Element {
        let mut acc = self.zero();
        for (mono, c) in p.terms() {
            let mut t = c.clone();
            for (j, pw) in mono.powers().iter().enumerate() {
                for _ in 0..*pw {
                    t = t.mul(&self.gen_var(id, j as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn set_tracing(&self, on: bool) {
        *self.0.trace.borrow_mut() = if on { Some(Vec::new()) } else { None };
    }

    pub fn is_tracing(&self) -> bool {
        self.0.trace.borrow().is_some()
    }

    pub(crate) fn trace(&self, line: impl FnOnce() -> String) {
        if let Some(log) = self.0.trace.borrow_mut().as_mut() {
            log.push(line());
        }
    }

    /// Drains the collected trace lines.
    pub fn take_trace(&self) -> Vec<String> {
        self.0.trace.borrow_mut().as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub(crate) fn cached_expansion(&self, e: &Element, level: usize) -> Option<SliceSeries> {
        self.0.expansions.borrow().get(&(e.clone(), level)).cloned()
    }

    pub(crate) fn store_expansion(&self, e: &Element, level: usize, s: &SliceSeries) {
        self.0.expansions.borrow_mut().insert((e.clone(), level), s.clone());
    }
}

#[cfg(test)]
mod tests;
