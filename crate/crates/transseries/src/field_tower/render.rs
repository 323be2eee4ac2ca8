//! Text rendering of elements and expansions.

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Element, GenMono, Mono, Poly, SliceSeries, Tower};
use crate::error::Result;
use crate::order_core::{ExponentScalar, ExponentVector};

/// `Pretty` spells monomials as powers of `x`, `log(x)` and `exp(...)`;
/// `Raw` prints exponent vectors `b^(-alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RenderMode {
    #[default]
    Pretty,
    Raw,
}

/// `x`, `log(x)`, `log(log(x))`, ...
pub fn iterated_log_label(j: usize) -> String {
    (0..j).fold("x".to_string(), |acc, _| format!("log({acc})"))
}

fn power_suffix(p: &ExponentScalar) -> String {
    let r = p.as_rational();
    if r.is_one() {
        String::new()
    } else if r.is_integer() {
        format!("^{r}")
    } else {
        format!("^({r})")
    }
}

/// Wraps `s` in parentheses unless it is a single factor.
fn atom(s: &str) -> String {
    if s.contains([' ', '*', '/']) || s.starts_with('-') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Joins rendered terms with ` + ` / ` - `.
fn join_terms(terms: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// `c * factors`, with unit coefficients elided.
fn with_coefficient(c: &BigRational, factors: &[String]) -> String {
    if factors.is_empty() {
        return c.to_string();
    }
    let body = factors.join("*");
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    }
}

impl Tower {
    /// Name of `b_k^p`, or `None` when `p = 0`.
    fn basis_factor(&self, k: usize, p: &ExponentScalar) -> Option<String> {
        if p.is_zero() {
            return None;
        }
        Some(match self.basis().iterated_log_index(k - 1) {
            Some(j) => format!("{}{}", atom(&iterated_log_label(j)), power_suffix(p)),
            None => {
                let phi = self.log_of_basis(k).expect("exponential entries have a log");
                format!("exp({})", self.render(&phi.scale(p.as_rational()), RenderMode::Pretty))
            }
        })
    }

    fn gen_factor(&self, v: &super::GenVar, p: u32) -> String {
        let mut s = self.generator(v.gen).name().to_string();
        for _ in 0..v.order {
            s = format!("d({s})");
        }
        if p > 1 {
            s = format!("{s}^{p}");
        }
        s
    }

    fn gen_factors(&self, g: &GenMono) -> Vec<String> {
        g.iter().map(|(v, p)| self.gen_factor(v, *p)).collect()
    }

    fn mono_factors(&self, m: &Mono, mode: RenderMode) -> Vec<String> {
        let mut out = Vec::new();
        match mode {
            RenderMode::Pretty => {
                for (i, a) in m.exps.coords().iter().enumerate() {
                    out.extend(self.basis_factor(i + 1, &-a));
                }
            }
            RenderMode::Raw => {
                if !m.exps.is_zero() {
                    out.push(format!("b^{}", -&m.exps));
                }
            }
        }
        out.extend(self.gen_factors(&m.gens));
        out
    }

    fn render_poly(&self, p: &Poly, mode: RenderMode) -> String {
        join_terms(p.terms().map(|(m, c)| with_coefficient(c, &self.mono_factors(m, mode))))
    }

    pub fn render(&self, e: &Element, mode: RenderMode) -> String {
        if e.is_polynomial() {
            return self.render_poly(e.num(), mode);
        }
        let flip = e.den().terms().next().is_some_and(|(_, c)| c.is_negative());
        let (num, den) = if flip { (e.num().neg(), e.den().neg()) } else { (e.num().clone(), e.den().clone()) };
        let (num, den) = (self.render_poly(&num, mode), self.render_poly(&den, mode));
        format!("{}/{}", atom(&num), atom(&den))
    }

    /// `b_m^{-beta}` spelled out; `"1"` for `beta = 0`.
    pub fn render_expansion_monomial(&self, m: usize, beta: &ExponentScalar, mode: RenderMode) -> String {
        let mono = Mono::new(ExponentVector::unit(self.dim(), m - 1, beta.clone()), GenMono::one());
        let f = self.mono_factors(&mono, mode);
        if f.is_empty() {
            "1".into()
        } else {
            f.join("*")
        }
    }

    fn render_series_term(&self, c: &Element, m: usize, beta: &ExponentScalar, mode: RenderMode) -> String {
        if mode == RenderMode::Raw || beta.is_zero() {
            let shift = Mono::new(ExponentVector::unit(self.dim(), m - 1, beta.clone()), GenMono::one());
            return self.render(&c.mul_term(&shift, &BigRational::one()), mode);
        }
        let mono = self.render_expansion_monomial(m, beta, mode);
        match c.as_constant() {
            Some(k) if k.is_one() => mono,
            Some(k) if (-&k).is_one() => format!("-{mono}"),
            Some(k) => format!("{k}*{mono}"),
            None => {
                let body = self.render(c, mode);
                let single = c.is_polynomial() && c.num().len() == 1;
                if single {
                    format!("{body}*{mono}")
                } else {
                    format!("({body})*{mono}")
                }
            }
        }
    }

    /// Nonzero terms of an expansion at level `m` with exponent below
    /// `order`, followed by `O(b_m^{-order})` if the series continues.
    pub fn render_series(&self, s: &SliceSeries, m: usize, order: &ExponentScalar, mode: RenderMode) -> Result<String> {
        let mut terms = Vec::new();
        let mut cur = s.clone();
        let mut truncated = false;
        while let Some((t, rest)) = cur.head()? {
            if t.exponent >= *order {
                truncated = true;
                break;
            }
            if !self.zero_test(&t.coeff)? {
                terms.push(self.render_series_term(&t.coeff, m, &t.exponent, mode));
            }
            cur = rest;
        }
        let mut out = if terms.is_empty() && !truncated { "0".to_string() } else { join_terms(terms) };
        if truncated {
            let o = format!("O({})", self.render_expansion_monomial(m, order, mode));
            if out == "0" {
                out = o;
            } else {
                out = format!("{out} + {o}");
            }
        }
        Ok(out)
    }
}
