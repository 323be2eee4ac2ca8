//! Surface syntax of scripts.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    /// `d(e)`: the derivation `d_1`.
    D,
    /// `D(e, k)`: the derivation `d_k`.
    DAt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::D => "d",
            Func::DAt => "D",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// A nonnegative literal with a terminating decimal expansion.
    Num(BigRational),
    /// `x` or a bound name.
    Var(String),
    /// `d^j F`, written `F`, `F'`, `F''`, ...
    F(u32),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn num(n: i64) -> Expr {
        Expr::Num(BigRational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    /// Binding strength: sums 1, products 2, prefix minus 3, powers 4, atoms 5.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Decimal digits of `r`, which must have a terminating expansion.
fn decimal(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let ten = BigInt::from(10);
    let mut digits = 0usize;
    let mut scaled = r.clone();
    while !scaled.is_integer() {
        scaled *= BigRational::from_integer(ten.clone());
        digits += 1;
    }
    let n = scaled.to_integer().abs();
    let (int, frac) = n.div_rem(&ten.pow(digits as u32));
    format!("{int}.{frac:0>digits$}")
}

/// True when `r` has a terminating decimal expansion.
pub fn is_decimal(r: &BigRational) -> bool {
    let mut d = r.denom().clone();
    for p in [2, 5] {
        let p = BigInt::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    d.is_one()
}

fn wrap(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => write!(f, "{}", decimal(r)),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::F(j) => write!(f, "F{}", "'".repeat(*j as usize)),
            Expr::Neg(e) => {
                write!(f, "-")?;
                wrap(e, 4, f)
            }
            Expr::Bin(op, a, b) => {
                let (level, sym) = match op {
                    BinOp::Add => (1, " + "),
                    BinOp::Sub => (1, " - "),
                    BinOp::Mul => (2, "*"),
                    BinOp::Div => (2, "/"),
                };
                wrap(a, level, f)?;
                write!(f, "{sym}")?;
                wrap(b, level + 1, f)
            }
            Expr::Pow(a, b) => {
                wrap(a, 5, f)?;
                write!(f, "^")?;
                wrap(b, 3, f)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    /// `basis(x, exp(x), ...)`.
    Basis(Vec<Expr>),
    Let {
        name: String,
        value: Expr,
    },
    /// `let name = dsolve(P)`.
    Solve {
        name: String,
        equation: Expr,
    },
    /// `expand(e, n)`.
    Expand(Expr, u32),
    ZeroTest(Vec<Expr>),
    /// A bare expression, printed after evaluation.
    Show(Expr),
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |es: &[Expr]| es.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        match self {
            Stmt::Basis(es) => write!(f, "basis({})", list(es)),
            Stmt::Let { name, value } => write!(f, "let {name} = {value}"),
            Stmt::Solve { name, equation } => write!(f, "let {name} = dsolve({equation})"),
            Stmt::Expand(e, n) => write!(f, "expand({e}, {n})"),
            Stmt::ZeroTest(es) => write!(f, "zerotest({})", list(es)),
            Stmt::Show(e) => write!(f, "{e}"),
        }
    }
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located<T> {
    pub at: Location,
    pub node: T,
}

pub type Script = Vec<Located<Stmt>>;
