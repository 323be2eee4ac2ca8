//! Zero test on extensions by distinguished solutions: Ritt reduction,
//! root separation bounds and the recursive test on lists of differential
//! polynomials.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;

use crate::diffpoly::{adjoin_solution, DiffPolynomial};
use crate::error::{Error, Result};
use crate::field_tower::{Element, GenId, RenderMode, Tower};
use crate::linear_ode::LinearOperator;
use crate::order_core::{real_root_upper_bound, ExponentScalar, ExtendedValuation, RationalPoly};

/// `(leader order, degree in the leader)`; `Bottom` for polynomials free of `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RittRank {
    Bottom,
    Rank { leader: usize, degree: u32 },
}

impl fmt::Display for RittRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RittRank::Bottom => write!(f, "-inf"),
            RittRank::Rank { leader, degree } => write!(f, "({leader}, {degree})"),
        }
    }
}

pub fn rank(p: &DiffPolynomial) -> RittRank {
    match leader(p) {
        None => RittRank::Bottom,
        Some(j) => RittRank::Rank { leader: j, degree: p.degree_in(j) },
    }
}

/// Order `j` of the highest derivative `d^j F` present.
pub fn leader(p: &DiffPolynomial) -> Option<usize> {
    p.terms().filter_map(|(m, _)| m.order()).max()
}

fn require_leader(p: &DiffPolynomial) -> Result<usize> {
    leader(p).ok_or_else(|| Error::Contract("polynomial has no leader".into()))
}

/// Leading coefficient in the leader.
pub fn initial(p: &DiffPolynomial) -> Result<DiffPolynomial> {
    let j = require_leader(p)?;
    Ok(p.coefficients_in(j).pop().expect("leader occurs"))
}

/// Partial derivative with respect to the leader.
pub fn separant(p: &DiffPolynomial) -> Result<DiffPolynomial> {
    Ok(p.partial(require_leader(p)?))
}

/// `R` with `I^a S^b P - R` in the differential ideal of the divisors.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub remainder: DiffPolynomial,
    /// Multiplications by initials, per divisor.
    pub initial_powers: Vec<u32>,
    /// Multiplications by separants, per divisor.
    pub separant_powers: Vec<u32>,
}

/// One pseudo-division step of `r` by `b` in `d^k F`.
fn pseudo_step(tower: &Tower, r: &DiffPolynomial, b: &DiffPolynomial, k: usize) -> Result<DiffPolynomial> {
    let rc = r.coefficients_in(k);
    let bc = b.coefficients_in(k);
    let e = rc.len() - 1;
    let eb = bc.len() - 1;
    let shift = DiffPolynomial::var(r.dim(), k).pow((e - eb) as u32);
    let out = bc[eb].mul(r).sub(&rc[e].mul(&shift).mul(b));
    out.pruned(tower)
}

/// Ritt reduction of `p` by `divisors`. At each step the highest reducible
/// variable is eliminated using the divisor of highest rank that applies.
pub fn ritt_reduce(tower: &Tower, p: &DiffPolynomial, divisors: &[DiffPolynomial]) -> Result<ReductionResult> {
    let mut initial_powers = vec![0; divisors.len()];
    let mut separant_powers = vec![0; divisors.len()];
    let leaders: Vec<(usize, u32)> = divisors
        .iter()
        .map(|q| {
            let j = require_leader(q)?;
            Ok((j, q.degree_in(j)))
        })
        .collect::<Result<_>>()?;
    let mut r = p.pruned(tower)?;
    'outer: while let Some(top) = leader(&r) {
        for k in (0..=top).rev() {
            let dk = r.degree_in(k);
            if dk == 0 {
                continue;
            }
            let choice = divisors
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    let (j, d) = leaders[*i];
                    j < k || (j == k && dk >= d)
                })
                .max_by(|(_, a), (_, b)| cmp_for_sorting(a, b));
            let Some((i, q)) = choice else { continue };
            let j = leaders[i].0;
            r = if j < k {
                separant_powers[i] += 1;
                let mut theta = q.clone();
                for _ in j..k {
                    theta = theta.derive(tower);
                }
                pseudo_step(tower, &r, &theta, k)?
            } else {
                initial_powers[i] += 1;
                pseudo_step(tower, &r, q, k)?
            };
            continue 'outer;
        }
        break;
    }
    Ok(ReductionResult { remainder: r, initial_powers, separant_powers })
}

/// Rank, then total degree, then the multi-indices.
fn cmp_for_sorting(a: &DiffPolynomial, b: &DiffPolynomial) -> Ordering {
    rank(a)
        .cmp(&rank(b))
        .then(a.degree().cmp(&b.degree()))
        .then_with(|| a.terms().map(|(m, _)| m).cmp(b.terms().map(|(m, _)| m)))
}

/// Data attached to a generator `f` with `P(f) = 0`, computed once.
#[derive(Clone, Debug)]
pub struct Context {
    level: usize,
    value_valuation: ExponentScalar,
    indicial: RationalPoly,
    root_bound: ExponentScalar,
}

impl Context {
    /// `v_n(f)`.
    pub fn value_valuation(&self) -> &ExponentScalar {
        &self.value_valuation
    }

    /// `I_{P,f}`.
    pub fn indicial(&self) -> &RationalPoly {
        &self.indicial
    }

    /// Upper bound for the real roots of `I_{P,f}`, or `v_n(f)` when it
    /// has none.
    pub fn root_bound(&self) -> &ExponentScalar {
        &self.root_bound
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

/// `L_{P,f}` written in `d_n`.
fn linear_part(tower: &Tower, p: &DiffPolynomial, f: &Element, n: usize) -> Result<LinearOperator> {
    p.linear_part_at(tower, f).to_derivation(tower, n)
}

pub fn context(tower: &Tower, id: GenId) -> Result<Rc<Context>> {
    let gen = tower.generator(id);
    if let Some(ctx) = gen.context.borrow().as_ref() {
        return Ok(Rc::clone(ctx));
    }
    let n = gen.level();
    let p = gen.equation();
    let value_valuation = tower.generator_stream(id, 0).valuation_of_nonzero()?;
    let at_zero = linear_part(tower, p, &tower.zero(), n)?;
    let ExtendedValuation::Finite(bound) = at_zero.valuation(tower)? else {
        return Err(Error::Contract(format!("{} has a zero linear part", gen.name())));
    };
    let at_f = linear_part(tower, p, &tower.gen_var(id, 0), n)?;
    let indicial = at_f.indicial_at(tower, &bound)?;
    let root_bound = match indicial.degree() {
        None => return Err(Error::Contract(format!("{} has a zero indicial polynomial", gen.name()))),
        Some(0) => value_valuation.clone(),
        Some(_) => real_root_upper_bound(&indicial)?,
    };
    let ctx = Rc::new(Context { level: n, value_valuation, indicial, root_bound });
    *gen.context.borrow_mut() = Some(Rc::clone(&ctx));
    Ok(ctx)
}

/// Outcome of the final bounded expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub generator: String,
    pub level: usize,
    pub sigma: ExponentScalar,
    pub bound: ExponentScalar,
    /// First exponent of `Q(f)` past the bound, if the expansion continues.
    pub next_exponent: Option<ExponentScalar>,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma = {}, ", self.sigma)?;
        match &self.next_exponent {
            Some(e) => write!(f, "v{}(Q({})) >= {e}", self.level, self.generator),
            None => write!(f, "Q({}) = 0", self.generator),
        }
    }
}

/// Result of a zero test with the certificate of the deciding step, when
/// it was the bounded expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub zero: bool,
    pub certificate: Option<Certificate>,
}

/// Do `Q_1(f), ..., Q_s(f)` all vanish? `f` is the generator `id`.
pub fn zero_test(tower: &Tower, id: GenId, qs: Vec<DiffPolynomial>) -> Result<bool> {
    Ok(run(tower, id, qs)?.zero)
}

fn sorted(mut qs: Vec<DiffPolynomial>) -> Vec<DiffPolynomial> {
    qs.sort_by(cmp_for_sorting);
    qs
}

fn with_prepended(first: DiffPolynomial, qs: &[DiffPolynomial]) -> Vec<DiffPolynomial> {
    let mut out = vec![first];
    out.extend(qs.iter().cloned());
    sorted(out)
}

thread_local! {
    static DEPTH: Cell<usize> = const { Cell::new(0) };
}

/// Nesting level of zero tests, for trace indentation.
struct DepthGuard(usize);

impl DepthGuard {
    fn enter() -> Self {
        DepthGuard(DEPTH.with(|d| d.replace(d.get() + 1)))
    }

    fn pad(&self) -> String {
        "  ".repeat(self.0)
    }
}

impl Drop for DepthGuard {
    fn drop(&mut self) {
        DEPTH.with(|d| d.set(self.0));
    }
}

fn run(tower: &Tower, id: GenId, qs: Vec<DiffPolynomial>) -> Result<Verdict> {
    let depth = DepthGuard::enter();
    let pad = depth.pad();
    let no_cert = |zero| Ok(Verdict { zero, certificate: None });
    let gen = tower.generator(id);
    let name = gen.name().to_string();
    let qs = sorted(qs.into_iter().map(|q| q.pruned(tower)).collect::<Result<Vec<_>>>()?);
    if qs.iter().any(DiffPolynomial::is_zero) {
        return Err(Error::Contract("zero polynomial passed to the zero test".into()));
    }
    let q = qs[0].clone();
    let show = |p: &DiffPolynomial| p.render(tower, RenderMode::Pretty);
    tower.trace(|| format!("{pad}zerotest[{name}]: {} polynomial(s), Q = {}, rank {}", qs.len(), show(&q), rank(&q)));
    if q.is_constant() {
        tower.trace(|| format!("{pad}  step 1: Q is in the base field: false"));
        return no_cert(false);
    }
    let init = initial(&q)?;
    if zero_test(tower, id, vec![init.clone()])? {
        tower.trace(|| format!("{pad}  step 2: I_Q = {} vanishes", show(&init)));
        return run(tower, id, with_prepended(init, &qs));
    }
    let sep = separant(&q)?;
    if zero_test(tower, id, vec![sep.clone()])? {
        tower.trace(|| format!("{pad}  step 3: S_Q = {} vanishes", show(&sep)));
        return run(tower, id, with_prepended(sep, &qs));
    }
    tower.trace(|| format!("{pad}  steps 2-3: I_Q(f) and S_Q(f) are nonzero"));
    let divisor = std::slice::from_ref(&q);
    for (j, label) in qs[1..].iter().map(|j| (j, "Q_i")).chain([(gen.equation(), "P")]) {
        let r = ritt_reduce(tower, j, divisor)?.remainder;
        if !r.is_zero() {
            tower.trace(|| format!("{pad}  step 4: {label} rem Q = {}", show(&r)));
            return run(tower, id, with_prepended(r, &qs));
        }
    }
    tower.trace(|| format!("{pad}  step 4: every remainder vanishes"));

    let ctx = context(tower, id)?;
    let n = ctx.level;
    let f = tower.gen_var(id, 0);
    let valuation_of = |p: &DiffPolynomial| -> Result<ExponentScalar> {
        tower.expand(&tower.substitute_generator(p, id), n)?.valuation_of_nonzero()
    };
    let v_init = valuation_of(&init)?;
    let v_sep = valuation_of(&sep)?;
    let zero = ExponentScalar::zero();
    let sigma =
        [&ctx.value_valuation, &zero, &ctx.root_bound, &v_init, &v_sep].into_iter().max().expect("nonempty").clone();
    tower.trace(|| {
        format!(
            "{pad}  step 5: I(N) = {}, sigma = max(v{n}(f) = {}, v{n}(L_P) = 0, Z = {}, v{n}(I_Q(f)) = {v_init}, v{n}(S_Q(f)) = {v_sep}) = {sigma}",
            ctx.indicial, ctx.value_valuation, ctx.root_bound
        )
    });

    let lq = linear_part(tower, &q, &f, n)?;
    let mut v_lq = v_sep.clone();
    for c in lq.coeffs() {
        if let Some(v) = tower.expand(c, n)?.valuation_below(&v_lq)? {
            v_lq = v_lq.min(v);
        }
    }
    let mut bound = sigma.clone();
    bound += &v_lq;
    let value = tower.expand(&tower.substitute_generator(&q, id), n)?;
    let below = value.valuation_below(&bound)?;
    let zero = below.is_none();
    let next_exponent = if zero {
        value.raw_terms().find(|t| t.as_ref().map_or(true, |t| t.exponent > bound)).transpose()?.map(|t| t.exponent)
    } else {
        None
    };
    tower.trace(|| match &below {
        Some(v) => format!("{pad}  step 6: v{n}(L_Q) = {v_lq}, bound = {bound}, nonzero coefficient at {v}: false"),
        None => format!("{pad}  step 6: v{n}(L_Q) = {v_lq}, bound = {bound}, no coefficient up to the bound: true"),
    });
    Ok(Verdict { zero, certificate: Some(Certificate { generator: name, level: n, sigma, bound, next_exponent }) })
}

/// Zero test of an element, reporting the bounded-expansion certificate
/// when the decision was made in the highest generator's context.
pub fn decide(tower: &Tower, e: &Element) -> Result<Verdict> {
    let plain = |zero| Ok(Verdict { zero, certificate: None });
    let num = e.num();
    if !num.has_gens() {
        return plain(num.is_zero());
    }
    let top = num
        .terms()
        .flat_map(|(m, _)| m.gens.gens().collect::<Vec<_>>())
        .max_by_key(|g| (tower.gen_level(*g), *g))
        .expect("has generators");
    let gen = tower.generator(top);
    let single_piece = num.terms().all(|(m, _)| m.exps.truncated(gen.level()) == m.exps);
    if gen.is_trivial() || !single_piece {
        return plain(tower.zero_test(e)?);
    }
    let q = tower.as_diff_polynomial(top, num).pruned(tower)?;
    if q.is_zero() || q.is_constant() {
        return plain(q.is_zero());
    }
    run(tower, top, vec![q])
}

/// Adjoins the distinguished solution of a quasi-linear `P` and prepares
/// its zero-test context.
pub fn extend(tower: &Tower, name: &str, p: &DiffPolynomial) -> Result<GenId> {
    let id = adjoin_solution(tower, name, p)?;
    if !tower.generator(id).is_trivial() {
        context(tower, id)?;
    }
    Ok(id)
}

#[cfg(test)]
mod tests;
