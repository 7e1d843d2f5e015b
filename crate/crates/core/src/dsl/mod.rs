//! Surface syntax for iteration expressions.
//!
//! The iteral form `I[x=v, n=k](body)` evaluates `body` as a self-map of `x`,
//! applied `k` times starting from `v`; `n=inf` iterates until the
//! convergence policy stops it. The initial value is evaluated in the
//! enclosing scope, so iterals nest both in initial-value position and, via
//! an outer binder's variable, in function position.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := factor { ("*" | "/") factor }
//! factor  := "-" factor | power
//! power   := atom [ "^" factor ]
//! atom    := number | "i" | ident | func "(" expr ")" | iteral | "(" expr ")"
//! iteral  := "I" "[" ident "=" expr "," "n" "=" count "]" "(" expr ")"
//! count   := digits | "inf"
//! number  := digits [ "." digits ] [ ("e" | "E") ["+" | "-"] digits ]
//! func    := "sin" | "cos" | "exp" | "abs" | "sqrt"
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus; `i` is the
//! imaginary unit. `I`, `i`, `inf`, and the function names are reserved.
//! [`Expr`]'s `Display` is the canonical formatter: `parse(format(e)) == e`
//! for every parser-producible tree.

mod ast;
mod eval;
mod parser;

pub use ast::{BinOp, Expr, Func, UnaryOp};
pub use eval::{eval, Env, EvalError};
pub use parser::{parse, ParseError};

/// Display-only rendering with the Cyrillic iteration glyph: `I[..]` becomes
/// `И[..]` and `n=inf` becomes `n=∞`. Not accepted back by [`parse`].
pub fn format_unicode(expr: &Expr) -> String {
    expr.to_string()
        .replace("I[", "\u{418}[")
        .replace("n=inf", "n=\u{221e}")
}
