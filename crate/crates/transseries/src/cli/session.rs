//! Statement execution against a growing tower.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::ast::{BinOp, Expr, Func, Located, Stmt};
use super::parse::{parse_script, Diagnostic};
use crate::diffpoly::DiffPolynomial;
use crate::error::{Axiom, Error};
use crate::field_tower::{Element, GenId, RenderMode, Tower};
use crate::order_core::ExponentScalar;
use crate::transbasis::{self, Embedding, Transbasis};
use crate::zerotest::{decide, extend};

/// Rendering and tracing switches.
#[derive(Clone, Debug)]
pub struct Options {
    /// Exponent bound for printed expansions of solved names.
    pub order: u32,
    pub trace: bool,
    pub raw: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { order: 5, trace: false, raw: false }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Element(Element),
    Poly(DiffPolynomial),
}

/// A value with the index of the tower it was computed in.
#[derive(Clone, Debug)]
struct Value {
    epoch: usize,
    kind: Kind,
}

type EResult<T> = Result<T, String>;

fn lib(e: Error) -> String {
    e.to_string()
}

/// What one call to [`Session::run`] produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Result and trace lines, for stdout.
    pub lines: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
    /// Some zero test answered false.
    pub nonzero: bool,
}

/// Interpreter state: the current tower and the names bound so far.
pub struct Session {
    options: Options,
    tower: Tower,
    basis_declared: bool,
    /// `embeddings[i]` carries epoch `i` into epoch `i + 1`.
    embeddings: Vec<Embedding>,
    bindings: HashMap<String, Value>,
}

impl Session {
    /// A session over the basis `(x)`.
    pub fn new(options: Options) -> Session {
        let tower = Tower::new(Transbasis::x());
        tower.set_tracing(options.trace);
        Session { options, tower, basis_declared: false, embeddings: Vec::new(), bindings: HashMap::new() }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    fn mode(&self) -> RenderMode {
        if self.options.raw {
            RenderMode::Raw
        } else {
            RenderMode::Pretty
        }
    }

    fn epoch(&self) -> usize {
        self.embeddings.len()
    }

    /// Parses and executes `src`, stopping at the first error.
    pub fn run(&mut self, src: &str) -> Report {
        let mut report = Report::default();
        let script = match parse_script(src) {
            Ok(s) => s,
            Err(d) => {
                report.diagnostics.push(d);
                return report;
            }
        };
        for stmt in &script {
            let start = report.lines.len();
            let outcome = self.execute(stmt, &mut report);
            report.lines.splice(start..start, self.tower.take_trace());
            if let Err(message) = outcome {
                report.diagnostics.push(Diagnostic::new(stmt.at, message));
                break;
            }
        }
        report
    }

    fn execute(&mut self, stmt: &Located<Stmt>, report: &mut Report) -> EResult<()> {
        match &stmt.node {
            Stmt::Basis(entries) => self.declare_basis(entries),
            Stmt::Let { name, value } => {
                self.check_fresh(name)?;
                let v = self.eval(value)?;
                self.bindings.insert(name.clone(), v);
                Ok(())
            }
            Stmt::Solve { name, equation } => {
                self.check_fresh(name)?;
                let p = match self.eval_current(equation)? {
                    Kind::Poly(p) => p,
                    Kind::Element(_) => return Err("dsolve expects a differential polynomial in F".into()),
                };
                let id = extend(&self.tower, name, &p).map_err(lib)?;
                let f = self.tower.gen_var(id, 0);
                let shown = self.render_expansion(&f, self.options.order)?;
                report.lines.push(format!("{name} = {shown}"));
                self.bindings.insert(name.clone(), Value { epoch: self.epoch(), kind: Kind::Element(f) });
                Ok(())
            }
            Stmt::Expand(e, n) => {
                let e = self.element(e)?;
                report.lines.push(self.render_expansion(&e, *n)?);
                Ok(())
            }
            Stmt::ZeroTest(es) => {
                let mut elements = Vec::new();
                for e in es {
                    elements.push(self.element(e)?);
                }
                let mut line = "zerotest: true".to_string();
                for e in &elements {
                    let verdict = decide(&self.tower, e).map_err(lib)?;
                    if !verdict.zero {
                        line = "zerotest: false".into();
                        report.nonzero = true;
                        break;
                    }
                    if let (1, Some(cert)) = (elements.len(), &verdict.certificate) {
                        line = format!("zerotest: true ({cert})");
                    }
                }
                report.lines.push(line);
                Ok(())
            }
            Stmt::Show(e) => {
                let before = self.epoch();
                let generators = self.tower.generator_count();
                let value = self.eval_current(e)?;
                if self.epoch() != before {
                    report.lines.push(format!("basis = {}", self.render_basis()));
                }
                for id in (generators..self.tower.generator_count()).map(GenId) {
                    let f = self.tower.gen_var(id, 0);
                    let shown = self.render_expansion(&f, self.options.order)?;
                    report.lines.push(format!("{} = {shown}", self.tower.generator(id).name()));
                }
                report.lines.push(match value {
                    Kind::Element(v) => self.tower.render(&v, self.mode()),
                    Kind::Poly(p) => p.render(&self.tower, self.mode()),
                });
                Ok(())
            }
        }
    }

    fn check_fresh(&self, name: &str) -> EResult<()> {
        if self.bindings.contains_key(name) || self.tower.generator_by_name(name).is_some() {
            return Err(format!("'{name}' is already bound"));
        }
        Ok(())
    }

    /// `(x, exp(x), ...)` in the current rendering mode.
    pub fn render_basis(&self) -> String {
        let t = &self.tower;
        let parts: Vec<String> = (1..=t.dim()).map(|k| t.render(&t.basis_element(k), RenderMode::Pretty)).collect();
        format!("({})", parts.join(", "))
    }

    fn render_expansion(&self, e: &Element, order: u32) -> EResult<String> {
        let t = &self.tower;
        let level = t.level(e).max(1);
        let s = t.expand(e, level).map_err(lib)?;
        t.render_series(&s, level, &ExponentScalar::from(i64::from(order)), self.mode()).map_err(lib)
    }

    fn declare_basis(&mut self, entries: &[Expr]) -> EResult<()> {
        if self.basis_declared || !self.bindings.is_empty() || self.tower.generator_count() > 0 {
            return Err("the basis must be declared once, before any binding".into());
        }
        let depth = iterated_log_depth(&entries[0]).ok_or_else(|| {
            lib(Error::Axiom {
                axiom: Axiom::Tb1,
                reason: format!("the first entry {} is not an iterated logarithm of x", entries[0]),
            })
        })?;
        self.tower = Tower::new(Transbasis::iterated_log(depth));
        for entry in &entries[1..] {
            let basis = match iterated_log_depth(entry) {
                Some(j) => self.tower.basis().push_iterated_log(j).map_err(lib)?,
                None => {
                    let Expr::Call(Func::Exp, args) = entry else {
                        return Err(format!("basis entry {entry} is neither log^j(x) nor exp(...)"));
                    };
                    let before = self.epoch();
                    let phi = self.element(&args[0])?;
                    if self.epoch() != before {
                        return Err(format!("the exponent of {entry} needs a basis extension"));
                    }
                    self.tower.basis().push_exp(&phi).map_err(lib)?
                }
            };
            self.tower = Tower::new(basis);
        }
        self.tower.set_tracing(self.options.trace);
        self.basis_declared = true;
        Ok(())
    }

    fn eval_current(&mut self, e: &Expr) -> EResult<Kind> {
        let v = self.eval(e)?;
        Ok(self.lift(v).kind)
    }

    fn element(&mut self, e: &Expr) -> EResult<Element> {
        match self.eval_current(e)? {
            Kind::Element(v) => Ok(v),
            Kind::Poly(_) => Err(format!("{e} involves F; expected a field element")),
        }
    }

    fn lift(&self, v: Value) -> Value {
        let mut kind = v.kind;
        for emb in &self.embeddings[v.epoch..] {
            kind = match kind {
                Kind::Element(e) => Kind::Element(emb.embed(&e)),
                Kind::Poly(p) => Kind::Poly(emb.embed_polynomial(&p)),
            };
        }
        Value { epoch: self.epoch(), kind }
    }

    fn here(&self, kind: Kind) -> Value {
        Value { epoch: self.epoch(), kind }
    }

    fn adopt(&mut self, ext: transbasis::Extension) -> Value {
        if let Some(emb) = ext.embedding {
            self.embeddings.push(emb);
            self.tower = ext.tower;
        }
        self.here(Kind::Element(ext.value))
    }

    fn eval(&mut self, e: &Expr) -> EResult<Value> {
        let t = self.tower.clone();
        Ok(match e {
            Expr::Num(r) => self.here(Kind::Element(t.constant(r.clone()))),
            Expr::Var(name) if name == "x" => {
                let pos = t.basis().position_of_iterated_log(0).ok_or("x is not in the basis")?;
                self.here(Kind::Element(t.basis_element(pos + 1)))
            }
            Expr::Var(name) => {
                if let Some(v) = self.bindings.get(name) {
                    v.clone()
                } else if let Some(id) = t.generator_by_name(name) {
                    self.here(Kind::Element(t.gen_var(id, 0)))
                } else {
                    return Err(format!("unknown name '{name}'"));
                }
            }
            Expr::F(j) => self.here(Kind::Poly(DiffPolynomial::var(t.dim(), *j as usize))),
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                let a = self.lift(a);
                self.here(match a.kind {
                    Kind::Element(v) => Kind::Element(v.neg()),
                    Kind::Poly(p) => Kind::Poly(p.neg()),
                })
            }
            Expr::Bin(op, a, b) => {
                let a = self.eval(a)?;
                let b = self.eval(b)?;
                let (a, b) = (self.lift(a).kind, self.lift(b).kind);
                let kind = self.binary(*op, a, b)?;
                self.here(kind)
            }
            Expr::Pow(a, b) => {
                let base = self.eval(a)?;
                let r = match self.eval_current(b)? {
                    Kind::Element(k) => k
                        .as_constant()
                        .ok_or_else(|| format!("exponent {b} is not a constant; write a^b as exp(b*log(a))"))?,
                    Kind::Poly(_) => return Err(format!("exponent {b} involves F")),
                };
                let kind = self.power(self.lift(base).kind, &r)?;
                self.here(kind)
            }
            Expr::Call(func, args) => {
                let arg = self.eval(&args[0])?;
                let arg = self.lift(arg).kind;
                let t = self.tower.clone();
                match (func, arg) {
                    (Func::Exp | Func::Log, Kind::Poly(_)) => {
                        return Err(format!("{} of a polynomial in F", func.name()))
                    }
                    (Func::Exp, Kind::Element(v)) => {
                        let ext = transbasis::exp(&t, &v).map_err(lib)?;
                        self.adopt(ext)
                    }
                    (Func::Log, Kind::Element(v)) => {
                        let ext = transbasis::log(&t, &v).map_err(lib)?;
                        self.adopt(ext)
                    }
                    (Func::D, Kind::Element(v)) => self.here(Kind::Element(t.derive(&v))),
                    (Func::D, Kind::Poly(p)) => self.here(Kind::Poly(p.derive(&t))),
                    (Func::DAt, arg) => {
                        let k = match &args[1] {
                            Expr::Num(k) => k.to_integer().to_usize().filter(|k| (1..=t.dim()).contains(k)),
                            _ => None,
                        }
                        .ok_or_else(|| format!("level {} is outside 1..={}", args[1], t.dim()))?;
                        let scale = t.inv(t.lambda(k)).map_err(lib)?;
                        self.here(match arg {
                            Kind::Element(v) => Kind::Element(t.derive_at(&v, k)),
                            Kind::Poly(p) => Kind::Poly(p.derive(&t).scale(&scale)),
                        })
                    }
                }
            }
        })
    }

    fn binary(&self, op: BinOp, a: Kind, b: Kind) -> EResult<Kind> {
        let t = &self.tower;
        Ok(match (op, a, b) {
            (BinOp::Div, _, Kind::Poly(_)) => return Err("division by a polynomial in F".into()),
            (BinOp::Div, Kind::Element(a), Kind::Element(b)) => Kind::Element(t.div(&a, &b).map_err(lib)?),
            (BinOp::Div, Kind::Poly(a), Kind::Element(b)) => Kind::Poly(a.scale(&t.inv(&b).map_err(lib)?)),
            (op, Kind::Element(a), Kind::Element(b)) => Kind::Element(match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                _ => a.mul(&b),
            }),
            (op, a, b) => {
                let (a, b) = (as_poly(a), as_poly(b));
                Kind::Poly(match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    _ => a.mul(&b),
                })
            }
        })
    }

    fn power(&self, base: Kind, r: &BigRational) -> EResult<Kind> {
        let t = &self.tower;
        if r.is_integer() {
            let k = r.to_integer().to_i64().ok_or("exponent out of range")?;
            return Ok(match base {
                Kind::Poly(p) => {
                    let k = u32::try_from(k).map_err(|_| "negative power of a polynomial in F".to_string())?;
                    Kind::Poly(p.pow(k))
                }
                Kind::Element(v) => {
                    if k < 0 && t.zero_test(&v).map_err(lib)? {
                        return Err(lib(Error::DivisionByZero));
                    }
                    Kind::Element(v.pow(k).map_err(lib)?)
                }
            });
        }
        let Kind::Element(v) = base else {
            return Err("fractional power of a polynomial in F".into());
        };
        match v.num().as_single().filter(|(m, c)| v.is_polynomial() && m.gens.is_one() && c.is_one()) {
            Some((m, _)) => Ok(Kind::Element(t.monomial(&m.exps.scale(&ExponentScalar::from(r.clone()))))),
            None => {
                Err(format!("fractional powers are only supported for monomials, got {}", t.render(&v, self.mode())))
            }
        }
    }
}

fn as_poly(k: Kind) -> DiffPolynomial {
    match k {
        Kind::Poly(p) => p,
        Kind::Element(e) => DiffPolynomial::constant(e),
    }
}

/// `j` when `e` is `log(...log(x))` with `j` logarithms.
fn iterated_log_depth(e: &Expr) -> Option<usize> {
    match e {
        Expr::Var(name) if name == "x" => Some(0),
        Expr::Call(Func::Log, args) => iterated_log_depth(&args[0]).map(|j| j + 1),
        _ => None,
    }
}
