//! Linear differential operators `L = L_0 + L_1 d_k + ... + L_r d_k^r` with
//! tower coefficients, and lazy distinguished solutions of `L f = g`.

use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field_tower::{Element, RenderMode, SliceSeries, Tower};
use crate::lazy_series::{LazySeries, Term};
use crate::order_core::{ExponentScalar, ExponentVector, ExtendedValuation, GridCertificate, RationalPoly};

/// Closed forms of one-level-down solutions are materialized from at most
/// this many terms.
pub const MATERIALIZE_LIMIT: usize = 64;

/// `sum L_i d_k^i` where `d_k = lambda_k^{-1} d_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    coeffs: Vec<Element>,
    derivation: usize,
}

impl LinearOperator {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Element>, derivation: usize) -> Self {
        while coeffs.last().is_some_and(Element::is_zero) {
            coeffs.pop();
        }
        LinearOperator { coeffs, derivation }
    }

    /// `d_k`.
    pub fn derivation_op(tower: &Tower, k: usize) -> Self {
        Self::new(vec![tower.zero(), tower.one()], k)
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Element> {
        self.coeffs.get(i)
    }

    /// Index `k` of the derivation the operator is written in.
    pub fn derivation(&self) -> usize {
        self.derivation
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.derivation, other.derivation, "operators in different derivations");
        let n = self.coeffs.len().max(other.coeffs.len());
        let d = self.coeffs.first().or(other.coeffs.first()).map_or(1, Element::dim);
        let zero = Element::zero(d);
        let coeffs =
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero).add(other.coeffs.get(i).unwrap_or(&zero))).collect();
        Self::new(coeffs, self.derivation)
    }

    /// `e * L`.
    pub fn scale(&self, e: &Element) -> Self {
        Self::new(self.coeffs.iter().map(|c| e.mul(c)).collect(), self.derivation)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<Self> {
        Ok(Self::new(self.coeffs.iter().map(f).collect::<Result<_>>()?, self.derivation))
    }

    /// `L f` for a closed-form `f`.
    pub fn apply(&self, tower: &Tower, f: &Element) -> Element {
        let mut acc = tower.zero();
        let mut d = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = tower.derive_at(&d, self.derivation);
            }
            acc = acc.add(&c.mul(&d));
        }
        acc
    }

    /// `L f` for `f` given by its expansion at level `m`.
    pub fn apply_series(&self, tower: &Tower, f: &SliceSeries, m: usize) -> Result<SliceSeries> {
        let mut acc = LazySeries::zero(tower.domain());
        let mut d = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = derive_series_at(tower, &d, m, self.derivation)?;
            }
            acc = acc.add(&tower.expand(c, m)?.mul(&d));
        }
        Ok(acc)
    }

    /// `(a d + b) o self` for elements `a`, `b`, in the same derivation.
    fn compose_first_order(&self, tower: &Tower, a: &Element, b: &Element) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![tower.zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            let dc = tower.derive_at(c, self.derivation);
            out[i] = out[i].add(&a.mul(&dc)).add(&b.mul(c));
            out[i + 1] = out[i + 1].add(&a.mul(c));
        }
        Self::new(out, self.derivation)
    }

    /// `sum L_i A^i` for a first-order operator `A = a d_j + b`.
    fn substitute_first_order(&self, tower: &Tower, j: usize, a: &Element, b: &Element) -> Self {
        let mut power = Self::new(vec![tower.one()], j);
        let mut acc = Self::new(Vec::new(), j);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.compose_first_order(tower, a, b);
            }
            acc = acc.add(&power.scale(c));
        }
        acc
    }

    /// The same operator written in `d_j`, using `d_k = (lambda_j / lambda_k) d_j`.
    pub fn to_derivation(&self, tower: &Tower, j: usize) -> Result<Self> {
        if j == self.derivation {
            return Ok(self.clone());
        }
        let mu = tower.lambda(j).div(tower.lambda(self.derivation))?;
        Ok(self.substitute_first_order(tower, j, &mu, &tower.zero()))
    }

    /// `M` with `M f = b^alpha L(b^{-alpha} f)`.
    pub fn conj_mul(&self, tower: &Tower, alpha: &ExponentVector) -> Result<Self> {
        if alpha.is_zero() {
            return Ok(self.clone());
        }
        let k = self.derivation;
        let mut sum = tower.zero();
        for (i, a) in alpha.coords().iter().enumerate() {
            if !a.is_zero() {
                sum = sum.add(&tower.lambda(i + 1).scale(a.as_rational()));
            }
        }
        let c = sum.neg().div(tower.lambda(k))?;
        Ok(self.substitute_first_order(tower, k, &tower.one(), &c))
    }

    /// `v(L)`: the least joint valuation of a coefficient.
    pub fn valuation(&self, tower: &Tower) -> Result<ExtendedValuation> {
        let mut best = ExtendedValuation::Infinite;
        for c in &self.coeffs {
            best = best.min(tower.joint_valuation(c)?);
        }
        Ok(best)
    }

    /// `v_m(L)`, or `None` when every coefficient vanishes.
    pub fn valuation_at(&self, tower: &Tower, m: usize) -> Result<Option<ExponentScalar>> {
        let mut best: Option<ExponentScalar> = None;
        for c in &self.coeffs {
            if let Some(v) = tower.valuation_at(c, m)? {
                best = Some(match best {
                    Some(b) if b <= v => b,
                    _ => v,
                });
            }
        }
        Ok(best)
    }

    /// `I_L(N) = sum (L_i)_{v(L)} (-N)^i`.
    pub fn indicial(&self, tower: &Tower) -> Result<RationalPoly> {
        match self.valuation(tower)? {
            ExtendedValuation::Infinite => Err(Error::ZeroPolynomial),
            ExtendedValuation::Finite(v) => self.indicial_at(tower, &v),
        }
    }

    /// The indicial polynomial read off at a known `v = v(L)`. Coefficients
    /// are only searched up to `v`.
    pub fn indicial_at(&self, tower: &Tower, v: &ExponentVector) -> Result<RationalPoly> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let lead = match tower.joint_valuation_below(c, v)? {
                None => BigRational::zero(),
                Some((w, k)) if w == *v => k,
                Some(_) => {
                    return Err(Error::Contract(format!("coefficient {i} lies below the operator valuation")));
                }
            };
            coeffs.push(if i % 2 == 1 { -lead } else { lead });
        }
        Ok(RationalPoly::new(coeffs))
    }

    /// `nu_{L,alpha}`: index of the first nonzero coefficient of the
    /// conjugate by `b^{-alpha}`.
    pub fn nu(&self, tower: &Tower, alpha: &ExponentVector) -> Result<usize> {
        let conj = self.conj_mul(tower, alpha)?;
        for (i, c) in conj.coeffs.iter().enumerate() {
            if !tower.zero_test(c)? {
                return Ok(i);
            }
        }
        Err(Error::ZeroPolynomial)
    }

    pub fn render(&self, tower: &Tower, mode: RenderMode) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let d = match i {
                0 => String::new(),
                1 => format!("D{}", self.derivation),
                _ => format!("D{}^{i}", self.derivation),
            };
            let cs = tower.render(c, mode);
            parts.push(match (d.is_empty(), c.as_constant()) {
                (true, _) => cs,
                (false, Some(k)) if k.is_one() => d,
                (false, Some(k)) if (-&k).is_one() => format!("-{d}"),
                (false, _) => format!("({cs})*{d}"),
            });
        }
        if parts.is_empty() {
            return "0".into();
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

/// `d_k s` for an expansion `s` at level `m`, coefficientwise.
pub fn derive_series_at(tower: &Tower, s: &SliceSeries, m: usize, k: usize) -> Result<SliceSeries> {
    let t = tower.clone();
    let mu = tower.lambda(m).div(tower.lambda(k))?;
    Ok(s.map_coeffs(move |term| {
        let dm = t.derive_at(&term.coeff, m).sub(&term.coeff.scale(term.exponent.as_rational()));
        Ok(mu.mul(&dm))
    }))
}

struct LinearSolver {
    tower: Tower,
    level: usize,
    head: LinearOperator,
    tails: Vec<SliceSeries>,
    cert: GridCertificate,
}

/// The distinguished solution of `L f = g` as an expansion at level `m`.
/// `L` may be written in any derivation; `g` is an expansion at level `m`.
pub fn dsolve_linear(tower: &Tower, l: &LinearOperator, g: &SliceSeries, m: usize) -> Result<SliceSeries> {
    let l = l.to_derivation(tower, m)?;
    let Some(vm) = l.valuation_at(tower, m)? else {
        return Err(Error::DivisionByZero);
    };
    let norm = tower.basis_power(m, vm.clone());
    let l = l.scale(&norm);
    let g = g.scale(&tower.one(), &-vm);
    let zero = ExponentScalar::zero();
    let mut head = Vec::new();
    let mut tails = Vec::new();
    let mut gens = g.cert().generators().to_vec();
    for c in l.coeffs() {
        let s = tower.expand(c, m)?;
        head.push(s.coefficient(&zero)?);
        gens.extend(s.cert().positive_part_generators()?);
        tails.push(s.filter_exponents(|e| e.is_positive()));
    }
    let cert = GridCertificate::new(gens, g.cert().offset().clone())?;
    let solver =
        Rc::new(LinearSolver { tower: tower.clone(), level: m, head: LinearOperator::new(head, m), tails, cert });
    Ok(linear_stream(solver, g))
}

fn linear_stream(solver: Rc<LinearSolver>, residual: SliceSeries) -> SliceSeries {
    let tower = solver.tower.clone();
    let cert = solver.cert.clone();
    LazySeries::lazy(tower.domain(), cert, move || {
        let Some((t, rest)) = residual.head()? else {
            return Ok(None);
        };
        let tower = &solver.tower;
        let m = solver.level;
        if tower.zero_test(&t.coeff)? {
            let term = Term::new(tower.zero(), t.exponent);
            return Ok(Some((term, linear_stream(Rc::clone(&solver), rest))));
        }
        let psi = solve_one_down(tower, &solver.head, m, &t.exponent, &t.coeff)?;
        let mut next = rest;
        let mut chi = psi.clone();
        for (i, tail) in solver.tails.iter().enumerate() {
            if i > 0 {
                chi = tower.derive_at(&chi, m).sub(&chi.scale(t.exponent.as_rational()));
            }
            if !chi.is_zero() {
                next = next.sub(&tail.scale(&chi, &t.exponent));
            }
        }
        let term = Term::new(psi, t.exponent);
        Ok(Some((term, linear_stream(Rc::clone(&solver), next))))
    })
}

/// Solves `H_{x b_m^{-beta}} psi = rhs` one level down, where `head` is in
/// `d_m` with coefficients below level `m`, and returns `psi` in closed form.
pub(crate) fn solve_one_down(
    tower: &Tower,
    head: &LinearOperator,
    m: usize,
    beta: &ExponentScalar,
    rhs: &Element,
) -> Result<Element> {
    let conj = head.conj_mul(tower, &ExponentVector::unit(tower.dim(), m - 1, beta.clone()))?;
    if m == 1 {
        let c0 = conj.coeff(0).cloned().unwrap_or_else(|| tower.zero());
        let c0 =
            c0.as_constant().ok_or_else(|| Error::Contract("level-1 operator with non-scalar coefficient".into()))?;
        if c0.is_zero() {
            return Err(Error::Resonance(beta.to_string()));
        }
        return Ok(rhs.scale(&c0.recip()));
    }
    let op = conj.to_derivation(tower, m - 1)?;
    if op.is_zero() {
        return Err(Error::Resonance(beta.to_string()));
    }
    let s = dsolve_linear(tower, &op, &tower.expand(rhs, m - 1)?, m - 1)?;
    tower
        .materialize(&s, m - 1, MATERIALIZE_LIMIT)?
        .ok_or_else(|| Error::NotInAmbientField(format!("coefficient at exponent {beta} has no finite closed form")))
}

#[cfg(test)]
mod tests;
