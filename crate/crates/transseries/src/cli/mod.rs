//! Expression language and script runner.

pub mod ast;
pub mod parse;
mod session;

pub use ast::{BinOp, Expr, Func, Located, Location, Script, Stmt};
pub use parse::{is_keyword, parse_expr, parse_script, Diagnostic};
pub use session::{Options, Report, Session};
