//! Expansions of tower elements in `b_m^{-1}` and the valuation queries
//! built on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Element, GenMono, Mono, Poly, SliceSeries, Tower};
use crate::error::{Error, Result};
use crate::lazy_series::{LazySeries, Relation, Term};
use crate::order_core::{flat_compare, ExponentScalar, ExponentVector, ExtendedValuation, FlatRelation};

/// Dominant term `c * b^{-v}`.
pub type DominantTerm = (ExponentVector, BigRational);

impl Tower {
    /// Expansion of `e` as a series in `b_m^{-1}` with coefficients of
    /// level below `m`.
    pub fn expand(&self, e: &Element, m: usize) -> Result<SliceSeries> {
        if m == 0 || m > self.dim() {
            return Err(Error::Level(format!("no basis element b_{m} in a basis of size {}", self.dim())));
        }
        let lvl = self.level(e);
        if lvl > m {
            return Err(Error::Level(format!("element of level {lvl} cannot be expanded in b_{m}")));
        }
        if e.is_zero() {
            return Ok(LazySeries::zero(self.domain()));
        }
        if lvl < m {
            return Ok(LazySeries::constant(self.domain(), e.clone()));
        }
        if let Some(s) = self.cached_expansion(e, m) {
            return Ok(s);
        }
        let num = self.expand_poly(e.num(), m);
        let s = if e.is_polynomial() { num } else { num.mul(&self.expand_poly(e.den(), m).inverse()?) };
        self.store_expansion(e, m, &s);
        Ok(s)
    }

    fn expand_poly(&self, p: &Poly, m: usize) -> SliceSeries {
        let mut groups: BTreeMap<GenMono, Vec<Term<Element>>> = BTreeMap::new();
        for (mono, c) in p.terms() {
            let beta = mono.exps.get(m - 1).clone();
            let (top, low) = mono.gens.split(|v| self.gen_level(v.gen) == m);
            let mut exps = mono.exps.clone();
            exps.set(m - 1, ExponentScalar::zero());
            let coeff = Element::mono(c.clone(), Mono::new(exps, low));
            groups.entry(top).or_default().push(Term::new(coeff, beta));
        }
        let mut acc: Option<SliceSeries> = None;
        for (top, terms) in groups {
            let mut s = LazySeries::from_terms(self.domain(), terms);
            for (v, pw) in top.iter() {
                let g = self.generator_stream(v.gen, v.order);
                for _ in 0..*pw {
                    s = s.mul(&g);
                }
            }
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s),
            });
        }
        acc.unwrap_or_else(|| LazySeries::zero(self.domain()))
    }

    /// `v_m(e)`: exponent of the first nonzero term of the expansion in
    /// `b_m^{-1}`, or `None` for zero.
    pub fn valuation_at(&self, e: &Element, m: usize) -> Result<Option<ExponentScalar>> {
        if self.zero_test(e)? {
            return Ok(None);
        }
        Ok(Some(self.expand(e, m)?.valuation_of_nonzero()?))
    }

    /// Dominant exponent and coefficient, or `None` for zero.
    pub fn dominant(&self, e: &Element) -> Result<Option<DominantTerm>> {
        if self.zero_test(e)? {
            return Ok(None);
        }
        self.dominant_of_nonzero(e).map(Some)
    }

    fn dominant_of_nonzero(&self, e: &Element) -> Result<DominantTerm> {
        let lvl = self.level(e);
        if lvl == 0 {
            let c = e.as_constant().expect("level-0 elements are scalars");
            return Ok((ExponentVector::zeros(self.dim()), c));
        }
        let (lead, _) = self
            .expand(e, lvl)?
            .leading_term()?
            .ok_or_else(|| Error::Contract("nonzero element has an empty expansion".into()))?;
        let (mut v, c) = self.dominant_of_nonzero(&lead.coeff)?;
        v.set(lvl - 1, lead.exponent);
        Ok((v, c))
    }

    pub fn joint_valuation(&self, e: &Element) -> Result<ExtendedValuation> {
        Ok(match self.dominant(e)? {
            None => ExtendedValuation::Infinite,
            Some((v, _)) => ExtendedValuation::Finite(v),
        })
    }

    /// The dominant term if `v(e) <= bound`, else `None`. Only searches the
    /// expansions up to the bound, so it never needs a full zero test of
    /// `e` at its own level.
    pub fn joint_valuation_below(&self, e: &Element, bound: &ExponentVector) -> Result<Option<DominantTerm>> {
        if e.is_zero() {
            return Ok(None);
        }
        let lvl = self.level(e);
        for j in (lvl..bound.len()).rev() {
            let b = bound.get(j);
            if b.is_positive() {
                return self.dominant(e);
            }
            if b.is_negative() {
                return Ok(None);
            }
        }
        if lvl == 0 {
            let c = e.as_constant().expect("level-0 elements are scalars");
            return Ok(Some((ExponentVector::zeros(self.dim()), c)));
        }
        let top = bound.get(lvl - 1);
        let Some(t) = self.expand(e, lvl)?.first_nonzero_below(top)? else {
            return Ok(None);
        };
        let inner = if t.exponent < *top {
            self.dominant_of_nonzero(&t.coeff)?
        } else {
            let lower = bound.truncated(lvl - 1);
            match self.joint_valuation_below(&t.coeff, &lower)? {
                Some(d) => d,
                None => return Ok(None),
            }
        };
        let (mut v, c) = inner;
        v.set(lvl - 1, t.exponent);
        Ok(Some((v, c)))
    }

    /// Sign of `e`: the sign of its dominant coefficient.
    pub fn sign(&self, e: &Element) -> Result<Ordering> {
        Ok(match self.dominant(e)? {
            None => Ordering::Equal,
            Some((_, c)) => c.cmp(&BigRational::zero()),
        })
    }

    /// `e = large + constant + small` with `large` purely infinite and
    /// `small` infinitesimal. `large` is a finite closed form.
    pub fn canonical_decompose(&self, e: &Element) -> Result<(Element, BigRational, Element)> {
        let (large, constant) = self.large_and_constant(e)?;
        let small = e.sub(&large).sub(&self.constant(constant.clone()));
        Ok((large, constant, small))
    }

    fn large_and_constant(&self, e: &Element) -> Result<(Element, BigRational)> {
        let lvl = self.level(e);
        if lvl == 0 {
            return Ok((self.zero(), e.as_constant().expect("level-0 elements are scalars")));
        }
        let mut large = self.zero();
        let mut constant = BigRational::zero();
        for t in self.expand(e, lvl)?.raw_terms() {
            let t = t?;
            if t.exponent.is_positive() {
                break;
            }
            if self.zero_test(&t.coeff)? {
                continue;
            }
            if t.exponent.is_zero() {
                let (l, c) = self.large_and_constant(&t.coeff)?;
                large = large.add(&l);
                constant = c;
            } else {
                large = large.add(&t.coeff.mul(&self.basis_power(lvl, -t.exponent.clone())));
            }
        }
        Ok((large, constant))
    }

    /// Asymptotic relations on elements, via dominant terms.
    pub fn cmp_asymptotic(&self, e: &Element, f: &Element, relation: Relation) -> Result<bool> {
        let (vf, _) = self.dominant(f)?.ok_or_else(|| Error::Domain("comparison against zero".into()))?;
        Ok(match relation {
            Relation::Prec => self.joint_valuation_below(e, &vf)?.is_none(),
            Relation::PrecEq => self.joint_valuation_below(e, &vf)?.is_none_or(|(v, _)| v == vf),
            Relation::Asymp => self.joint_valuation_below(e, &vf)?.is_some_and(|(v, _)| v == vf),
            Relation::Sim => self.joint_valuation_below(&e.sub(f), &vf)?.is_none(),
            Relation::FlatPrec | Relation::FlatPrecEq => {
                let rel = flat_compare(&self.joint_valuation(e)?, &ExtendedValuation::Finite(vf));
                match relation {
                    Relation::FlatPrec => rel == FlatRelation::LittleO,
                    _ => rel != FlatRelation::Neither,
                }
            }
        })
    }

    /// Closed form of the terms of `s` with exponent below `bound`, `s`
    /// being an expansion at level `m`.
    pub fn truncation(&self, s: &SliceSeries, m: usize, bound: &ExponentScalar) -> Result<Element> {
        let mut acc = self.zero();
        for t in s.raw_terms_below(bound)? {
            acc = acc.add(&t.coeff.mul(&self.basis_power(m, -t.exponent)));
        }
        Ok(acc)
    }

    /// Closed form of `s` if it has at most `limit` raw terms.
    pub fn materialize(&self, s: &SliceSeries, m: usize, limit: usize) -> Result<Option<Element>> {
        let mut acc = self.zero();
        for (i, t) in s.raw_terms().enumerate() {
            if i >= limit {
                return Ok(None);
            }
            let t = t?;
            acc = acc.add(&t.coeff.mul(&self.basis_power(m, -t.exponent)));
        }
        Ok(Some(acc))
    }
}
