//! Differential polynomials `P in F{F}`: sums of `c * F^{i_0} (d F)^{i_1} ...`
//! with tower coefficients.

mod solve;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

pub use solve::{adjoin_solution, dsolve_quasilinear, linear_equation, QuasiLinearSolution};

use crate::error::{Error, Result};
use crate::field_tower::{Element, RenderMode, SliceSeries, Tower};
use crate::lazy_series::LazySeries;
use crate::linear_ode::LinearOperator;
use crate::order_core::{ExponentVector, ExtendedValuation};

/// Multi-index `(i_0, ..., i_r)`: the power product `prod (d^j F)^{i_j}`.
/// Trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct DiffMono(Vec<u32>);

impl DiffMono {
    pub fn new(mut powers: Vec<u32>) -> Self {
        while powers.last() == Some(&0) {
            powers.pop();
        }
        DiffMono(powers)
    }

    pub fn one() -> Self {
        DiffMono(Vec::new())
    }

    /// `d^j F`.
    pub fn var(j: usize) -> Self {
        let mut p = vec![0; j + 1];
        p[j] = 1;
        DiffMono(p)
    }

    pub fn powers(&self) -> &[u32] {
        &self.0
    }

    pub fn power(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Highest derivative present.
    pub fn order(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &DiffMono) -> DiffMono {
        let n = self.0.len().max(other.0.len());
        DiffMono::new((0..n).map(|j| self.power(j) + other.power(j)).collect())
    }

    fn with_power(&self, j: usize, p: u32) -> DiffMono {
        let mut v = self.0.clone();
        if v.len() <= j {
            v.resize(j + 1, 0);
        }
        v[j] = p;
        DiffMono::new(v)
    }
}

/// A differential polynomial over a tower. Coefficients are stored only when
/// syntactically nonzero; [`DiffPolynomial::pruned`] removes semantic zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiffPolynomial {
    dim: usize,
    terms: BTreeMap<DiffMono, Element>,
}

impl DiffPolynomial {
    pub fn zero(dim: usize) -> Self {
        DiffPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(c: Element) -> Self {
        Self::from_terms(c.dim(), [(DiffMono::one(), c)])
    }

    /// `d^j F`.
    pub fn var(dim: usize, j: usize) -> Self {
        Self::from_terms(dim, [(DiffMono::var(j), Element::one(dim))])
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (DiffMono, Element)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: DiffMono, c: &Element) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DiffMono, &Element)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &DiffMono) -> Element {
        self.terms.get(m).cloned().unwrap_or_else(|| Element::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when `P` has no `F`-dependence.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(DiffMono::is_one)
    }

    /// Highest derivative order present, `None` for `P in F`.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().filter_map(DiffMono::order).max()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(DiffMono::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        DiffPolynomial { dim: self.dim, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Element) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), &c.mul(d));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Element::one(self.dim)), |acc, _| acc.mul(self))
    }

    /// `P_[i]`: the terms of total degree `i`.
    pub fn homogeneous_part(&self, i: u32) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().filter(|(m, _)| m.degree() == i).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Element) -> Element) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Fallible version of [`DiffPolynomial::map_coeffs`].
    pub fn try_map_coeffs(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// `dP / d(d^j F)`.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let p = m.power(j);
            if p > 0 {
                let k = BigRational::from_integer(p.into());
                out.add_term(m.with_power(j, p - 1), &c.scale(&k));
            }
        }
        out
    }

    /// Degree in `d^j F`.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|m| m.power(j)).max().unwrap_or(0)
    }

    /// Coefficients of `P` as a polynomial in `d^j F`: entry `k` multiplies
    /// `(d^j F)^k`.
    pub fn coefficients_in(&self, j: usize) -> Vec<Self> {
        let d = self.degree_in(j) as usize;
        let mut out = vec![Self::zero(self.dim); d + 1];
        for (m, c) in &self.terms {
            let p = m.power(j);
            out[p as usize].add_term(m.with_power(j, 0), c);
        }
        out
    }

    /// Drops coefficients that vanish in the tower.
    pub fn pruned(&self, tower: &Tower) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if !tower.zero_test(c)? {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Highest level among the coefficients.
    pub fn level(&self, tower: &Tower) -> usize {
        self.terms.values().map(|c| tower.level(c)).max().unwrap_or(0)
    }

    /// Total derivative `d_1 P`.
    pub fn derive(&self, tower: &Tower) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &tower.derive(c));
            for (j, &p) in m.powers().iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let k = BigRational::from_integer(p.into());
                let lowered = m.with_power(j, p - 1);
                let raised = lowered.with_power(j + 1, lowered.power(j + 1) + 1);
                out.add_term(raised, &c.scale(&k));
            }
        }
        out
    }

    /// `P(f)` for a closed-form `f`.
    pub fn evaluate(&self, tower: &Tower, f: &Element) -> Element {
        let r = self.order().unwrap_or(0);
        let mut derivs = vec![f.clone()];
        for j in 1..=r {
            derivs.push(tower.derive(&derivs[j - 1]));
        }
        let mut acc = tower.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, &p) in m.powers().iter().enumerate() {
                for _ in 0..p {
                    t = t.mul(&derivs[j]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `P(f)` as a series, `f` given by its expansion at level `m`.
    pub fn evaluate_series(&self, tower: &Tower, f: &SliceSeries, m: usize) -> Result<SliceSeries> {
        let r = self.order().unwrap_or(0);
        let mut derivs = vec![f.clone()];
        for j in 1..=r {
            derivs.push(derive_series(tower, &derivs[j - 1], m));
        }
        let mut acc = LazySeries::zero(tower.domain());
        for (mono, c) in &self.terms {
            let mut t = tower.expand(c, m)?;
            for (j, &p) in mono.powers().iter().enumerate() {
                for _ in 0..p {
                    t = t.mul(&derivs[j]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `P_{+phi}`: the polynomial with `P_{+phi}(F) = P(phi + F)`.
    pub fn add_conj(&self, tower: &Tower, phi: &Element) -> Self {
        let r = self.order().unwrap_or(0);
        let mut shifted = Vec::with_capacity(r + 1);
        let mut d = phi.clone();
        for j in 0..=r {
            shifted.push(Self::constant(d.clone()).add(&Self::var(self.dim, j)));
            d = tower.derive(&d);
        }
        self.substitute(&shifted)
    }

    /// `P_{*phi}`: the polynomial with `P_{*phi}(F) = P(phi F)`.
    pub fn mul_conj(&self, tower: &Tower, phi: &Element) -> Self {
        let r = self.order().unwrap_or(0);
        let mut dphi = vec![phi.clone()];
        for j in 1..=r {
            dphi.push(tower.derive(&dphi[j - 1]));
        }
        let mut images = Vec::with_capacity(r + 1);
        for j in 0..=r {
            let mut img = Self::zero(self.dim);
            let mut binom = BigRational::one();
            for i in 0..=j {
                img = img.add(&Self::var(self.dim, i).scale(&dphi[j - i].scale(&binom)));
                binom = binom * BigRational::from_integer(((j - i) as i64).into())
                    / BigRational::from_integer(((i + 1) as i64).into());
            }
            images.push(img);
        }
        self.substitute(&images)
    }

    /// Replaces `d^j F` by `images[j]`.
    pub fn substitute(&self, images: &[Self]) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (j, &p) in m.powers().iter().enumerate() {
                t = t.mul(&images[j].pow(p));
            }
            out = out.add(&t);
        }
        out
    }

    /// `v(P)`: the least joint valuation of a coefficient.
    pub fn valuation(&self, tower: &Tower) -> Result<ExtendedValuation> {
        let mut best = ExtendedValuation::Infinite;
        for c in self.terms.values() {
            best = best.min(tower.joint_valuation(c)?);
        }
        Ok(best)
    }

    /// `v_m(P)`, or `None` for the zero polynomial.
    pub fn valuation_at(&self, tower: &Tower, m: usize) -> Result<Option<crate::order_core::ExponentScalar>> {
        let mut best = None;
        for c in self.terms.values() {
            if let Some(v) = tower.valuation_at(c, m)? {
                best = Some(match best {
                    None => v,
                    Some(b) => std::cmp::min(b, v),
                });
            }
        }
        Ok(best)
    }

    /// `D_P`: coefficients' dominant parts at `v(P)`, as rationals.
    pub fn dominant(&self, tower: &Tower) -> Result<BTreeMap<DiffMono, BigRational>> {
        let ExtendedValuation::Finite(v) = self.valuation(tower)? else {
            return Ok(BTreeMap::new());
        };
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((w, k)) = tower.dominant(c)? {
                if w == v {
                    out.insert(m.clone(), k);
                }
            }
        }
        Ok(out)
    }

    /// `v(P) = v(P_[1]) < v(P_[0])` after multiplicative conjugation by
    /// `b^{-alpha}`.
    pub fn is_quasilinear(&self, tower: &Tower, alpha: &ExponentVector) -> Result<bool> {
        let p = if alpha.is_zero() { self.clone() } else { self.mul_conj(tower, &tower.monomial(alpha)) };
        let (v, v0, v1) = p.valuation_triple(tower)?;
        Ok(v == v1 && v < v0)
    }

    /// `(v(P), v(P_[0]), v(P_[1]))`.
    pub fn valuation_triple(&self, tower: &Tower) -> Result<(ExtendedValuation, ExtendedValuation, ExtendedValuation)> {
        Ok((
            self.valuation(tower)?,
            self.homogeneous_part(0).valuation(tower)?,
            self.homogeneous_part(1).valuation(tower)?,
        ))
    }

    /// Positive Newton degree: `D_P` has no constant term.
    pub fn newton_degree_positive(&self, tower: &Tower) -> Result<bool> {
        Ok(!self.dominant(tower)?.contains_key(&DiffMono::one()))
    }

    /// `L_{P,f}`: the linear part of `P_{+f}`, as an operator in `d_1`.
    pub fn linear_part_at(&self, tower: &Tower, f: &Element) -> LinearOperator {
        let shifted = if f.is_zero() { self.clone() } else { self.add_conj(tower, f) };
        let r = shifted.order().unwrap_or(0);
        let coeffs = (0..=r).map(|j| shifted.coefficient(&DiffMono::var(j))).collect();
        LinearOperator::new(coeffs, 1)
    }

    /// Renders with `F`, `d(F)`, `d(d(F))`, ...
    pub fn render(&self, tower: &Tower, mode: RenderMode) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (j, &p) in m.powers().iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let mut v = "F".to_string();
                for _ in 0..j {
                    v = format!("d({v})");
                }
                factors.push(if p > 1 { format!("{v}^{p}") } else { v });
            }
            let body = factors.join("*");
            let cs = tower.render(c, mode);
            parts.push(match (body.is_empty(), c.as_constant()) {
                (true, _) => cs,
                (false, Some(k)) if k.is_one() => body,
                (false, Some(k)) if (-&k).is_one() => format!("-{body}"),
                (false, _) if c.is_polynomial() && c.num().len() == 1 => format!("{cs}*{body}"),
                (false, _) => format!("({cs})*{body}"),
            });
        }
        let mut out = String::new();
        for p in parts {
            if out.is_empty() {
                out = p;
            } else if let Some(rest) = p.strip_prefix('-') {
                out = format!("{out} - {rest}");
            } else {
                out = format!("{out} + {p}");
            }
        }
        out
    }
}

impl fmt::Display for DiffMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `d_1` applied to an expansion at level `m`, coefficientwise.
pub fn derive_series(tower: &Tower, s: &SliceSeries, m: usize) -> SliceSeries {
    let t = tower.clone();
    let lam = tower.lambda(m).clone();
    s.map_coeffs(move |term| {
        let d = t.derive(&term.coeff);
        Ok(d.sub(&lam.mul(&term.coeff).scale(term.exponent.as_rational())))
    })
}

pub(crate) fn require_nonzero(p: &DiffPolynomial) -> Result<()> {
    if p.is_zero() {
        return Err(Error::Contract("zero differential polynomial".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
