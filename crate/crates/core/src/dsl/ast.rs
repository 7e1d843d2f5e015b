//! Expression trees and the canonical formatter.

use crate::iteration::IterCount;
use crate::scalar::Scalar;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Abs, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Scalar),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// `I[var=init, n=count](body)`. `body` may reference `var`; free
    /// variables of `init` belong to the enclosing scope.
    Iteral {
        var: String,
        init: Box<Expr>,
        count: IterCount,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn num(s: Scalar) -> Expr {
        Expr::Num(s)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn negate(e: Expr) -> Expr {
        Expr::Unary(UnaryOp::Neg, Box::new(e))
    }

    pub fn call(f: Func, e: Expr) -> Expr {
        Expr::Call(f, Box::new(e))
    }

    pub fn iteral(var: impl Into<String>, init: Expr, count: IterCount, body: Expr) -> Expr {
        Expr::Iteral {
            var: var.into(),
            init: Box::new(init),
            count,
            body: Box::new(body),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Unary(..) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) | Expr::Iteral { .. } => 5,
        }
    }

    /// Write `self` into a grammar slot that accepts precedence >= `min`,
    /// parenthesizing when this node binds looser.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(s) => fmt_literal(s, f),
            Expr::Var(name) => f.write_str(name),
            Expr::Unary(UnaryOp::Neg, e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)
            }
            Expr::Binary(op, lhs, rhs) => {
                let (sym, lmin, rmin) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => (" * ", 2, 3),
                    BinOp::Div => (" / ", 2, 3),
                    BinOp::Pow => ("^", 5, 3),
                };
                lhs.fmt_prec(f, lmin)?;
                f.write_str(sym)?;
                rhs.fmt_prec(f, rmin)
            }
            Expr::Call(func, e) => {
                write!(f, "{}(", func.name())?;
                e.fmt_prec(f, 0)?;
                write!(f, ")")
            }
            Expr::Iteral {
                var,
                init,
                count,
                body,
            } => {
                write!(f, "I[{var}=")?;
                init.fmt_prec(f, 0)?;
                match count {
                    IterCount::Finite(n) => write!(f, ", n={n}](")?,
                    IterCount::Unbounded => write!(f, ", n=inf](")?,
                }
                body.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

/// Literal rendering that survives a round trip: integers print as digits,
/// reals always carry a decimal point so they reparse as reals, and the
/// imaginary unit prints as `i`. Other complex constants (never produced by
/// the parser) fall back to an arithmetic spelling.
fn fmt_literal(s: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match s {
        Scalar::Int(n) => write!(f, "{n}"),
        Scalar::Real(r) => {
            let text = r.to_string();
            if text.contains(['.', 'e', 'E']) {
                f.write_str(&text)
            } else {
                write!(f, "{text}.0")
            }
        }
        Scalar::Complex(z) if z.re == 0.0 && z.im == 1.0 => f.write_str("i"),
        Scalar::Complex(z) => write!(f, "({} + {}*i)", z.re, z.im),
    }
}

/// The canonical text form; [`super::parse`] of it reproduces the tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
