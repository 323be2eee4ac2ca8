//! Lexer and recursive-descent parser.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use super::ast::{BinOp, Expr, Func, Located, Location, Script, Stmt};

/// A message attached to a source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub at: Location,
    pub message: String,
}

impl Diagnostic {
    pub fn new(at: Location, message: impl Into<String>) -> Self {
        Diagnostic { at, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.message)
    }
}

impl std::error::Error for Diagnostic {}

const KEYWORDS: [&str; 11] = ["basis", "let", "dsolve", "expand", "zerotest", "exp", "log", "d", "D", "F", "x"];

pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    /// `F` followed by `j` primes.
    F(u32),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(r) => write!(f, "number {r}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::F(j) => write!(f, "'F{}'", "'".repeat(*j as usize)),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Location)>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let advance = |i: &mut usize, n: usize, line: &mut usize, column: &mut usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let at = Location { line, column };
        if c.is_whitespace() {
            advance(&mut i, 1, &mut line, &mut column);
        } else if c == '#' {
            let n = chars[i..].iter().take_while(|&&c| c != '\n').count();
            advance(&mut i, n, &mut line, &mut column);
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let n = chars[i..].iter().take_while(|c| c.is_ascii_digit() || **c == '.').count();
            let text: String = chars[i..i + n].iter().collect();
            let value =
                parse_decimal(&text).ok_or_else(|| Diagnostic::new(at, format!("malformed number '{text}'")))?;
            out.push((Tok::Num(value), at));
            advance(&mut i, n, &mut line, &mut column);
        } else if c.is_alphabetic() || c == '_' {
            let n = chars[i..].iter().take_while(|c| c.is_alphanumeric() || **c == '_').count();
            let text: String = chars[i..i + n].iter().collect();
            if text == "F" {
                let primes = chars[i + n..].iter().take_while(|&&c| c == '\'').count();
                out.push((Tok::F(primes as u32), at));
                advance(&mut i, n + primes, &mut line, &mut column);
            } else {
                out.push((Tok::Ident(text), at));
                advance(&mut i, n, &mut line, &mut column);
            }
        } else if "()+-*/^,;=".contains(c) {
            out.push((Tok::Sym(c), at));
            advance(&mut i, 1, &mut line, &mut column);
        } else {
            return Err(Diagnostic::new(at, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, Location { line, column }));
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let mut parts = text.split('.');
    let int = parts.next()?;
    let frac = parts.next().unwrap_or("");
    if parts.next().is_some() || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str_radix(&digits, 10).ok()?;
    let d = BigInt::from(10).pow(frac.len() as u32);
    Some(BigRational::new(n, d))
}

struct Parser {
    toks: Vec<(Tok, Location)>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn at(&self) -> Location {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::new(self.at(), format!("expected {wanted}, found {}", self.peek()))
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn script(&mut self) -> PResult<Script> {
        let mut out = Vec::new();
        loop {
            while self.eat(';') {}
            if *self.peek() == Tok::End {
                return Ok(out);
            }
            let at = self.at();
            let node = self.stmt()?;
            out.push(Located { at, node });
            if *self.peek() != Tok::End {
                self.expect(';')?;
            }
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let call = *self.peek_at(1) == Tok::Sym('(');
        if self.is_ident("basis") && call {
            self.bump();
            return Ok(Stmt::Basis(self.args()?));
        }
        if self.is_ident("zerotest") && call {
            self.bump();
            return Ok(Stmt::ZeroTest(self.args()?));
        }
        if self.is_ident("expand") && call {
            self.bump();
            self.expect('(')?;
            let e = self.expr()?;
            self.expect(',')?;
            let n = self.nat()?;
            self.expect(')')?;
            return Ok(Stmt::Expand(e, n));
        }
        if self.is_ident("let") {
            self.bump();
            let name = self.binder()?;
            self.expect('=')?;
            if self.is_ident("dsolve") && *self.peek_at(1) == Tok::Sym('(') {
                self.bump();
                self.expect('(')?;
                let equation = self.expr()?;
                self.expect(')')?;
                return Ok(Stmt::Solve { name, equation });
            }
            return Ok(Stmt::Let { name, value: self.expr()? });
        }
        Ok(Stmt::Show(self.expr()?))
    }

    fn binder(&mut self) -> PResult<String> {
        let at = self.at();
        match self.bump() {
            Tok::Ident(s) if !is_keyword(&s) => Ok(s),
            Tok::Ident(s) => Err(Diagnostic::new(at, format!("'{s}' is reserved"))),
            Tok::F(_) => Err(Diagnostic::new(at, "'F' is reserved")),
            t => Err(Diagnostic::new(at, format!("expected a name, found {t}"))),
        }
    }

    fn nat(&mut self) -> PResult<u32> {
        let at = self.at();
        match self.bump() {
            Tok::Num(r) if r.is_integer() => {
                u32::try_from(r.to_integer()).map_err(|_| Diagnostic::new(at, "order out of range"))
            }
            t => Err(Diagnostic::new(at, format!("expected a natural number, found {t}"))),
        }
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(acc),
            };
            self.bump();
            acc = Expr::bin(op, acc, self.term()?);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(acc),
            };
            self.bump();
            acc = Expr::bin(op, acc, self.unary()?);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let at = self.at();
        match self.bump() {
            Tok::Num(r) => Ok(Expr::Num(r)),
            Tok::F(j) => Ok(Expr::F(j)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "exp" => Some((Func::Exp, 1)),
                    "log" => Some((Func::Log, 1)),
                    "d" => Some((Func::D, 1)),
                    "D" => Some((Func::DAt, 2)),
                    _ => None,
                };
                if let Some((func, arity)) = func {
                    let args = self.args()?;
                    if args.len() != arity {
                        return Err(Diagnostic::new(
                            at,
                            format!("{} takes {arity} argument(s), got {}", func.name(), args.len()),
                        ));
                    }
                    if func == Func::DAt && !matches!(&args[1], Expr::Num(k) if k.is_integer() && !k.is_zero()) {
                        return Err(Diagnostic::new(at, "the level in D(e, k) must be a positive integer"));
                    }
                    return Ok(Expr::Call(func, args));
                }
                if is_keyword(&name) && name != "x" {
                    return Err(Diagnostic::new(at, format!("'{name}' cannot be used here")));
                }
                Ok(Expr::Var(name))
            }
            t => Err(Diagnostic::new(at, format!("expected an expression, found {t}"))),
        }
    }
}

pub fn parse_script(src: &str) -> Result<Script, Diagnostic> {
    Parser { toks: lex(src)?, pos: 0 }.script()
}

pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}
