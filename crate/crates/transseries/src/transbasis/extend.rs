//! Basis extensions and the exponential and logarithm of field elements.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Transbasis;
use crate::diffpoly::DiffPolynomial;
use crate::error::{Error, Result};
use crate::field_tower::{Element, GenId, GenMono, GenVar, Mono, Poly, Tower};
use crate::lazy_series::Relation;
use crate::order_core::{ExponentScalar, ExponentVector};
use crate::zerotest::extend;

struct EmbeddingInner {
    source: Tower,
    target: Tower,
    pos: usize,
    /// Old `d_1^j f` written with the new derivation, when `pos == 0`.
    images: RefCell<HashMap<GenVar, Element>>,
}

/// The inclusion of a tower into the tower over its basis with one entry
/// inserted at zero-based position `pos`. Generators keep their ids.
#[derive(Clone)]
pub struct Embedding(Rc<EmbeddingInner>);

impl Embedding {
    /// Builds the target tower over `basis` and carries every generator of
    /// `source` over, mapping its expansion rather than solving again.
    pub fn new(source: &Tower, basis: Transbasis, pos: usize) -> Result<Embedding> {
        if basis.len() != source.dim() + 1 || pos > source.dim() {
            return Err(Error::Contract("the target basis must insert exactly one entry".into()));
        }
        let target = Tower::new(basis);
        target.set_tracing(source.is_tracing());
        let emb = Embedding(Rc::new(EmbeddingInner {
            source: source.clone(),
            target: target.clone(),
            pos,
            images: RefCell::new(HashMap::new()),
        }));
        for id in (0..source.generator_count()).map(GenId) {
            let gen = source.generator(id);
            let equation = emb.embed_polynomial(gen.equation());
            let level = if pos < gen.level() { gen.level() + 1 } else { gen.level() };
            let series = (!gen.is_trivial()).then(|| {
                let inner = emb.clone();
                source.generator_stream(id, 0).map_into(target.domain(), move |c| Ok(inner.embed(c)))
            });
            target.register_generator(gen.name(), equation, level, series);
        }
        Ok(emb)
    }

    pub fn source(&self) -> &Tower {
        &self.0.source
    }

    pub fn target(&self) -> &Tower {
        &self.0.target
    }

    /// Zero-based index of the inserted basis element.
    pub fn position(&self) -> usize {
        self.0.pos
    }

    fn widen(&self, m: &Mono) -> Mono {
        Mono::new(m.exps.with_inserted(self.0.pos), m.gens.clone())
    }

    pub fn embed(&self, e: &Element) -> Element {
        if self.0.pos > 0 || !e.has_gens() {
            return e.map_monos(|m| self.widen(m));
        }
        let num = self.embed_poly(e.num());
        if e.is_polynomial() {
            return num;
        }
        num.div(&self.embed_poly(e.den())).expect("denominators stay nonzero")
    }

    fn embed_poly(&self, p: &Poly) -> Element {
        let target = &self.0.target;
        let mut acc = target.zero();
        for (m, c) in p.terms() {
            let mut t = Element::mono(c.clone(), Mono::new(m.exps.with_inserted(0), GenMono::one()));
            for (v, pw) in m.gens.iter() {
                t = t.mul(&self.image(*v).pow(i64::from(*pw)).expect("positive power"));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `d_1^j f` of the source as an element of the target, whose derivation
    /// is `b_0 d_1`.
    fn image(&self, v: GenVar) -> Element {
        if let Some(e) = self.0.images.borrow().get(&v) {
            return e.clone();
        }
        let target = &self.0.target;
        let e = if v.order == 0 {
            target.gen_var(v.gen, 0)
        } else {
            let prev = self.image(GenVar { gen: v.gen, order: v.order - 1 });
            target.derive(&prev).mul(&target.expansion_variable(1))
        };
        self.0.images.borrow_mut().insert(v, e.clone());
        e
    }

    /// Embeds the coefficients and, after a logarithmic insertion, rewrites
    /// `d_1^j F` in the new derivation.
    pub fn embed_polynomial(&self, p: &DiffPolynomial) -> DiffPolynomial {
        let target = &self.0.target;
        let n = target.dim();
        let q = DiffPolynomial::from_terms(n, p.terms().map(|(m, c)| (m.clone(), self.embed(c))));
        if self.0.pos > 0 {
            return q;
        }
        let mut images = vec![DiffPolynomial::var(n, 0)];
        let factor = target.expansion_variable(1);
        for _ in 0..p.order().unwrap_or(0) {
            let next = images.last().expect("nonempty").derive(target).scale(&factor);
            images.push(next);
        }
        q.substitute(&images)
    }
}

/// Result of an operation that may extend the tower.
#[derive(Clone)]
pub struct Extension {
    /// The tower holding `value`: the input tower or an extension of it.
    pub tower: Tower,
    pub value: Element,
    /// Set when the basis was extended.
    pub embedding: Option<Embedding>,
}

impl Extension {
    /// Carries an element of the input tower into `self.tower`.
    pub fn embed(&self, e: &Element) -> Element {
        match &self.embedding {
            Some(emb) => emb.embed(e),
            None => e.clone(),
        }
    }
}

/// `phi = -sum alpha_i log b_i + psi`, with `psi` split into its purely
/// large, constant and small parts.
#[derive(Clone, Debug)]
pub struct ExpDecomposition {
    /// `alpha_i` at index `i - 1`; `alpha_1` is always zero.
    pub alphas: Vec<ExponentScalar>,
    pub psi: Element,
    pub large: Element,
    pub constant: BigRational,
    pub small: Element,
    /// `log b_k < large < log b_{k+1}`; `0` when `large = 0`.
    pub k: usize,
}

/// Coefficient of the monomial `b^{-alpha}` in the expansion of `e`.
pub fn joint_coefficient(tower: &Tower, e: &Element, alpha: &ExponentVector) -> Result<BigRational> {
    let mut c = e.clone();
    for k in (1..=tower.dim()).rev() {
        if tower.level(&c) >= k {
            c = tower.expand(&c, k)?.coefficient(alpha.get(k - 1))?;
        } else if !alpha.get(k - 1).is_zero() {
            return Ok(BigRational::zero());
        }
    }
    Ok(c.as_constant().expect("level-0 elements are scalars"))
}

/// Strips the multiples of `log b_n, ..., log b_2` from `phi`, each
/// determined by the coefficient of the dominant monomial of `log b_i`.
pub fn decompose_for_exp(tower: &Tower, phi: &Element) -> Result<ExpDecomposition> {
    let n = tower.dim();
    let mut alphas = vec![ExponentScalar::zero(); n];
    let mut psi = phi.clone();
    for i in (2..=n).rev() {
        let log_b = tower.log_of_basis(i).expect("entries after the first are exponentials");
        let (d, a) = tower.dominant(log_b)?.expect("basis logarithms are nonzero");
        let l = joint_coefficient(tower, &psi, &d)?;
        if !l.is_zero() {
            let r = l / a;
            psi = psi.sub(&log_b.scale(&r));
            alphas[i - 1] = ExponentScalar::from(-r);
        }
    }
    let (large, constant, small) = tower.canonical_decompose(&psi)?;
    let k = if large.is_zero() {
        0
    } else {
        let mut k = 1;
        for i in 2..=n {
            let log_b = tower.log_of_basis(i).expect("exponential entry");
            if tower.cmp_asymptotic(log_b, &large, Relation::Prec)? {
                k = i;
            }
        }
        k
    };
    Ok(ExpDecomposition { alphas, psi, large, constant, small, k })
}

fn fresh_name(tower: &Tower, prefix: &str) -> String {
    (tower.generator_count()..)
        .map(|i| format!("{prefix}{i}"))
        .find(|name| tower.generator_by_name(name).is_none())
        .expect("unbounded search")
}

/// `exp(phi)`, inserting `exp(|large part|)` into the basis when needed and
/// adjoining `exp(small part) - 1` as a distinguished solution.
pub fn exp(tower: &Tower, phi: &Element) -> Result<Extension> {
    let dec = decompose_for_exp(tower, phi)?;
    if !dec.constant.is_zero() {
        return Err(Error::ConstantFieldExtension(format!("exp({})", dec.constant)));
    }
    let (target, embedding, mut value) = if dec.large.is_zero() {
        (tower.clone(), None, tower.one())
    } else {
        let sign = tower.sign(&dec.large)?;
        let abs = if sign == Ordering::Greater { dec.large.clone() } else { dec.large.neg() };
        let basis = tower.basis().insert_exp(dec.k, &abs)?;
        let emb = Embedding::new(tower, basis, dec.k)?;
        let target = emb.target().clone();
        let b = target.basis_element(dec.k + 1);
        let value = if sign == Ordering::Greater { b } else { target.inv(&b)? };
        (target, Some(emb), value)
    };
    let ext = Extension { tower: target.clone(), value: tower.one(), embedding };
    value = value.mul(&ext.embed(&tower.monomial(&ExponentVector::new(dec.alphas))));
    if !tower.zero_test(&dec.small)? {
        let s = ext.embed(&dec.small);
        let ds = DiffPolynomial::constant(target.derive(&s));
        let f = DiffPolynomial::var(target.dim(), 0);
        let p = DiffPolynomial::var(target.dim(), 1).sub(&ds.mul(&f)).sub(&ds);
        let id = extend(&target, &fresh_name(&target, "E"), &p)?;
        value = value.mul(&target.one().add(&target.gen_var(id, 0)));
    }
    Ok(Extension { value, ..ext })
}

/// `log(phi)` for `phi > 0` with leading coefficient `1`, inserting
/// `log b_1` into the basis when the dominant monomial involves `b_1`.
pub fn log(tower: &Tower, phi: &Element) -> Result<Extension> {
    let Some((alpha, c)) = tower.dominant(phi)? else {
        return Err(Error::Domain("log(0)".into()));
    };
    if c <= BigRational::zero() {
        return Err(Error::Domain(format!("log of a negative element: {}", tower.render(phi, Default::default()))));
    }
    if !c.is_one() {
        return Err(Error::ConstantFieldExtension(format!("log({c})")));
    }
    let eps = phi.div(&tower.monomial(&alpha))?.sub(&tower.one());
    let (target, embedding) = if alpha.get(0).is_zero() {
        (tower.clone(), None)
    } else {
        let emb = Embedding::new(tower, tower.basis().insert_log(), 0)?;
        (emb.target().clone(), Some(emb))
    };
    let ext = Extension { tower: target.clone(), value: target.zero(), embedding };
    let mut value = target.zero();
    for (i, a) in alpha.coords().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let log_b = match tower.log_of_basis(i + 1) {
            Some(l) => ext.embed(l),
            None => target.basis_element(1),
        };
        value = value.sub(&log_b.scale(a.as_rational()));
    }
    if !tower.zero_test(&eps)? {
        let e = ext.embed(&eps);
        let de = DiffPolynomial::constant(target.derive(&e));
        let df = DiffPolynomial::var(target.dim(), 1);
        let p = df.scale(&target.one().add(&e)).sub(&de);
        let id = extend(&target, &fresh_name(&target, "L"), &p)?;
        value = value.add(&target.gen_var(id, 0));
    }
    Ok(Extension { value, ..ext })
}
