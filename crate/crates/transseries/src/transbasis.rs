//! Transbases `(b_1, ..., b_n)`: `b_1` an iterated logarithm of `x`, every
//! later `b_i = exp(phi_i)` with `phi_i` purely large and positive over the
//! entries before it, and the logarithms strictly increasing.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Axiom, Error, Result};
use crate::field_tower::{Element, GenMono, Mono, Tower};
use crate::lazy_series::Relation;
use crate::order_core::{ExponentScalar, ExponentVector};

mod extend;

pub use extend::{decompose_for_exp, exp, joint_coefficient, log, Embedding, ExpDecomposition, Extension};

/// One entry of a basis description.
#[derive(Clone, Debug)]
pub enum BasisEntry {
    /// `log_j x`; `IteratedLog(0)` is `x`.
    IteratedLog(usize),
    /// `exp(phi)` with `phi` written over the full basis being described.
    Exp(Element),
}

/// A validated transbasis.
#[derive(Clone, Debug)]
pub struct Transbasis {
    log_depth: usize,
    logs: Vec<Option<Element>>,
}

fn axiom(axiom: Axiom, reason: impl Into<String>) -> Error {
    Error::Axiom { axiom, reason: reason.into() }
}

/// Resizes every exponent vector of `e` to `n` coordinates.
pub(crate) fn resize_element(e: &Element, n: usize) -> Element {
    e.map_monos(|m| {
        let mut c = m.exps.coords().to_vec();
        c.resize(n, ExponentScalar::zero());
        Mono::new(ExponentVector::new(c), m.gens.clone())
    })
}

impl Transbasis {
    /// The one-element basis `(log_depth x)`.
    pub fn iterated_log(log_depth: usize) -> Transbasis {
        Transbasis { log_depth, logs: vec![None] }
    }

    /// `(x)`.
    pub fn x() -> Transbasis {
        Self::iterated_log(0)
    }

    /// `b_1 = log_{log_depth} x`.
    pub fn log_depth(&self) -> usize {
        self.log_depth
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    /// `phi_i = log b_i` for the zero-based entry `i >= 1`.
    pub fn log_of(&self, i: usize) -> Option<&Element> {
        self.logs.get(i).and_then(|l| l.as_ref())
    }

    /// `Some(j)` when the zero-based entry `i` is `log_j x`.
    pub fn iterated_log_index(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return Some(self.log_depth);
        }
        let phi = self.log_of(i)?;
        let (m, c) = phi.num().as_single().filter(|_| phi.is_polynomial())?;
        if !c.is_one() || !m.gens.is_one() {
            return None;
        }
        let k = m.exps.highest_nonzero()?;
        if m.exps.level() != k + 1
            || *m.exps.get(k) != -ExponentScalar::one()
            || m.exps.coords()[..k].iter().any(|a| !a.is_zero())
        {
            return None;
        }
        let j = self.iterated_log_index(k)?;
        (j >= 1).then(|| j - 1)
    }

    /// Position of `log_j x` in the basis.
    pub fn position_of_iterated_log(&self, j: usize) -> Option<usize> {
        (0..self.len()).find(|&i| self.iterated_log_index(i) == Some(j))
    }

    /// Checks a full description.
    pub fn validate(entries: &[BasisEntry]) -> Result<Transbasis> {
        let Some(BasisEntry::IteratedLog(depth)) = entries.first() else {
            return Err(axiom(Axiom::Tb1, "the first entry must be an iterated logarithm of x"));
        };
        let mut basis = Transbasis::iterated_log(*depth);
        for (i, entry) in entries.iter().enumerate().skip(1) {
            basis = match entry {
                BasisEntry::IteratedLog(j) => basis.push_iterated_log(*j)?,
                BasisEntry::Exp(phi) => {
                    if phi.has_gens() {
                        return Err(axiom(Axiom::Tb2, format!("log b_{} is not in the monomial base field", i + 1)));
                    }
                    let outside = phi.num().terms().chain(phi.den().terms()).any(|(m, _)| m.exps.level() > i);
                    if outside {
                        return Err(axiom(Axiom::Tb2, format!("log b_{} involves b_{} or later", i + 1, i + 1)));
                    }
                    basis.push_exp(&resize_element(phi, i))?
                }
            };
        }
        Ok(basis)
    }

    /// Appends `log_j x`, which needs `log_{j+1} x` already present.
    pub fn push_iterated_log(&self, j: usize) -> Result<Transbasis> {
        let Some(pos) = self.position_of_iterated_log(j + 1) else {
            return Err(axiom(
                Axiom::Tb2,
                format!("log of {} is not a basis element", crate::field_tower::iterated_log_label(j)),
            ));
        };
        let n = self.len();
        let phi = Element::mono(
            BigRational::one(),
            Mono::new(ExponentVector::unit(n, pos, -ExponentScalar::one()), GenMono::one()),
        );
        self.push_exp(&phi)
    }

    /// Appends `exp(phi)` with `phi` written over this basis.
    pub fn push_exp(&self, phi: &Element) -> Result<Transbasis> {
        self.insert_exp(self.len(), phi)
    }

    /// Inserts `exp(phi)` at zero-based position `pos`; `phi` is written
    /// over this basis and may only involve entries before `pos`.
    pub fn insert_exp(&self, pos: usize, phi: &Element) -> Result<Transbasis> {
        if pos == 0 {
            return Err(axiom(Axiom::Tb1, "an exponential cannot be the first entry"));
        }
        let n = self.len() + 1;
        let widen = |e: &Element| e.map_monos(|m| Mono::new(m.exps.with_inserted(pos), m.gens.clone()));
        let mut logs: Vec<Option<Element>> = self.logs.iter().map(|l| l.as_ref().map(widen)).collect();
        logs.insert(pos, Some(widen(phi)));
        let candidate = Transbasis { log_depth: self.log_depth, logs };
        debug_assert_eq!(candidate.len(), n);
        candidate.check()?;
        Ok(candidate)
    }

    /// `(log_{l+1} x, b_1, ..., b_n)`.
    pub fn insert_log(&self) -> Transbasis {
        let n = self.len() + 1;
        let widen = |e: &Element| e.map_monos(|m| Mono::new(m.exps.with_inserted(0), m.gens.clone()));
        let mut logs: Vec<Option<Element>> = vec![None];
        let first = Element::mono(
            BigRational::one(),
            Mono::new(ExponentVector::unit(n, 0, -ExponentScalar::one()), GenMono::one()),
        );
        logs.push(Some(first));
        logs.extend(self.logs.iter().skip(1).map(|l| l.as_ref().map(widen)));
        Transbasis { log_depth: self.log_depth + 1, logs }
    }

    /// TB2 for every exponential entry, TB3 between consecutive logs, and
    /// the increasing chain of logarithmic derivatives.
    fn check(&self) -> Result<()> {
        let tower = Tower::new(self.clone());
        for i in 1..self.len() {
            let phi = self.log_of(i).expect("entries after the first are exponentials");
            if tower.level(phi) > i || phi.has_gens() {
                return Err(axiom(Axiom::Tb2, format!("log b_{} involves b_{} or later", i + 1, i + 1)));
            }
            let (_, constant, small) = tower.canonical_decompose(phi)?;
            if !constant.is_zero() || !tower.zero_test(&small)? {
                return Err(axiom(
                    Axiom::Tb2,
                    format!("log b_{} = {} is not purely large", i + 1, tower.render(phi, Default::default())),
                ));
            }
            if tower.sign(phi)? != Ordering::Greater {
                return Err(axiom(
                    Axiom::Tb2,
                    format!("log b_{} = {} is not positive", i + 1, tower.render(phi, Default::default())),
                ));
            }
            if i >= 2 {
                let prev = self.log_of(i - 1).expect("exponential entry");
                if !tower.cmp_asymptotic(prev, phi, Relation::Prec)? {
                    return Err(axiom(Axiom::Tb3, format!("log b_{} is not dominated by log b_{}", i, i + 1)));
                }
            }
            if !tower.cmp_asymptotic(tower.lambda(i), tower.lambda(i + 1), Relation::Prec)? {
                return Err(axiom(Axiom::Tb3, format!("d b_{i}/b_{i} is not dominated by d b_{}/b_{}", i + 1, i + 1)));
            }
        }
        Ok(())
    }
}
