//! Distinguished solutions of quasi-linear equations.

use std::cell::RefCell;
use std::rc::Rc;

use super::{require_nonzero, DiffMono, DiffPolynomial};
use crate::error::{Error, Result};
use crate::field_tower::{Element, GenId, SliceSeries, Tower};
use crate::lazy_series::{LazySeries, Term};
use crate::linear_ode::{solve_one_down, LinearOperator, MATERIALIZE_LIMIT};
use crate::order_core::{ExponentScalar, ExponentVector, ExtendedValuation, GridCertificate};

/// The distinguished solution of `P(f) = 0`, expanded at `level`.
#[derive(Clone, Debug)]
pub struct QuasiLinearSolution {
    pub level: usize,
    pub series: SliceSeries,
    /// `P_[0] = 0`, so the solution is `0`.
    pub trivial: bool,
}

/// `P(f) = 0` for `P` quasi-linear: `v(P) = v(P_[1]) < v(P_[0])`.
pub fn dsolve_quasilinear(tower: &Tower, p: &DiffPolynomial) -> Result<QuasiLinearSolution> {
    require_nonzero(p)?;
    let level = p.level(tower).max(1);
    let (v, v0, v1) = p.valuation_triple(tower)?;
    let ExtendedValuation::Finite(vp) = &v else {
        return Err(Error::Contract("zero differential polynomial".into()));
    };
    if v != v1 || v >= v0 {
        return Err(Error::NotQuasiLinear(format!("v(P) = {v}, v(P_[0]) = {v0}, v(P_[1]) = {v1}")));
    }
    if v0.is_infinite() {
        return Ok(QuasiLinearSolution { level, series: LazySeries::zero(tower.domain()), trivial: true });
    }
    let p = p.scale(&tower.monomial(&-vp));
    let m = level;
    let head = p.try_map_coeffs(|c| tower.expand(c, m)?.coefficient(&ExponentScalar::zero()))?;
    let start =
        if head.homogeneous_part(0).pruned(tower)?.is_zero() { tower.zero() } else { head_solution(tower, &head)? };
    let shifted = p.add_conj(tower, &start);
    let linear = shifted.linear_part_at(tower, &tower.zero()).to_derivation(tower, m)?;
    let linear_head = linear.map_coeffs(|c| tower.expand(c, m)?.coefficient(&ExponentScalar::zero()))?;
    let mut gens = Vec::new();
    for (_, c) in shifted.terms() {
        gens.extend(tower.expand(c, m)?.cert().positive_part_generators()?);
    }
    let cert = GridCertificate::new(gens, ExponentVector::zeros(1))?;
    let solver = Rc::new(Solver {
        tower: tower.clone(),
        level: m,
        equation: shifted,
        linear_head,
        partial: RefCell::new(tower.zero()),
        cert,
    });
    let tail = quasilinear_stream(solver, ExponentScalar::zero());
    let series = if tower.zero_test(&start)? {
        tail
    } else {
        LazySeries::monomial(tower.domain(), start, ExponentScalar::zero()).add(&tail)
    };
    Ok(QuasiLinearSolution { level, series, trivial: false })
}

/// Solves the level-below head equation, in closed form when the solution
/// is finite and as a fresh generator otherwise.
fn head_solution(tower: &Tower, head: &DiffPolynomial) -> Result<Element> {
    let sol = dsolve_quasilinear(tower, head)?;
    if sol.trivial {
        return Ok(tower.zero());
    }
    if let Some(e) = tower.materialize(&sol.series, sol.level, MATERIALIZE_LIMIT)? {
        return Ok(e);
    }
    let name = format!("H{}", tower.generator_count());
    let id = tower.register_generator(&name, head.clone(), sol.level, Some(sol.series));
    Ok(tower.gen_var(id, 0))
}

struct Solver {
    tower: Tower,
    level: usize,
    equation: DiffPolynomial,
    linear_head: LinearOperator,
    /// Sum of the terms emitted so far, beyond the constant head.
    partial: RefCell<Element>,
    cert: GridCertificate,
}

/// Terms of exponent `> after`, each chosen to cancel the first remaining
/// term of the residual `P(start + partial)`.
fn quasilinear_stream(solver: Rc<Solver>, after: ExponentScalar) -> SliceSeries {
    let tower = solver.tower.clone();
    let cert = solver.cert.clone();
    LazySeries::lazy(tower.domain(), cert, move || {
        let tower = &solver.tower;
        let m = solver.level;
        let s = solver.partial.borrow().clone();
        let residual = tower.expand(&solver.equation.evaluate(tower, &s), m)?;
        let next = residual.raw_terms().find(|t| t.as_ref().map_or(true, |t| t.exponent > after));
        let Some(t) = next.transpose()? else {
            return Ok(None);
        };
        if tower.zero_test(&t.coeff)? {
            let term = Term::new(tower.zero(), t.exponent.clone());
            return Ok(Some((term, quasilinear_stream(Rc::clone(&solver), t.exponent))));
        }
        let psi = solve_one_down(tower, &solver.linear_head, m, &t.exponent, &t.coeff.neg())?;
        let step = psi.mul(&tower.basis_power(m, -t.exponent.clone()));
        *solver.partial.borrow_mut() = s.add(&step);
        let term = Term::new(psi, t.exponent.clone());
        Ok(Some((term, quasilinear_stream(Rc::clone(&solver), t.exponent))))
    })
}

/// Adjoins the distinguished solution of `P(f) = 0` to the tower and returns
/// its generator.
pub fn adjoin_solution(tower: &Tower, name: &str, p: &DiffPolynomial) -> Result<GenId> {
    let sol = dsolve_quasilinear(tower, p)?;
    let series = (!sol.trivial).then_some(sol.series);
    Ok(tower.register_generator(name, p.clone(), sol.level, series))
}

/// `P = sum c_j d^j F - g`: the linear equation `L f = g` as a differential
/// polynomial.
pub fn linear_equation(l: &LinearOperator, tower: &Tower, g: &Element) -> Result<DiffPolynomial> {
    let l = l.to_derivation(tower, 1)?;
    let mut p = DiffPolynomial::constant(g.neg());
    for (j, c) in l.coeffs().iter().enumerate() {
        p = p.add(&DiffPolynomial::from_terms(tower.dim(), [(DiffMono::var(j), c.clone())]));
    }
    Ok(p)
}
