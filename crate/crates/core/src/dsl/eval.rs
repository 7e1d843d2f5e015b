//! Strict evaluator; iteral nodes delegate to the iteration engine.

use super::ast::{BinOp, Expr, Func, UnaryOp};
use crate::iteration::{iterate, ConvergencePolicy, IterOutcome};
use crate::scalar::{NumericError, Scalar};
use std::collections::HashMap;
use thiserror::Error;

/// Name bindings for free variables. Lookups of unbound names are errors,
/// never defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Env {
    bindings: HashMap<String, Scalar>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: Scalar) -> &mut Self {
        self.bindings.insert(name.into(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Scalar> {
        self.bindings.get(name)
    }
}

impl FromIterator<(String, Scalar)> for Env {
    fn from_iter<I: IntoIterator<Item = (String, Scalar)>>(iter: I) -> Self {
        Env {
            bindings: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// Evaluate `expr` under `env`.
///
/// A top-level iteral surfaces the full iteration outcome; any other
/// expression evaluates strictly to `Value`. Numeric failures anywhere —
/// division by zero, a nested iteral that diverges or cycles — are reported
/// as `DomainExit`, not as errors; only an unbound variable is an error, and
/// it is detected by a scope check before any arithmetic runs, so the report
/// is deterministic (leftmost unbound name first).
pub fn eval(expr: &Expr, env: &Env, policy: &ConvergencePolicy) -> Result<IterOutcome, EvalError> {
    check_scope(expr, env, &mut Vec::new())?;
    let mut locals = Vec::new();
    Ok(match expr {
        Expr::Iteral {
            var,
            init,
            count,
            body,
        } => {
            let start = match eval_scalar(init, env, &mut locals, policy) {
                Ok(v) => v,
                Err(_) => return Ok(IterOutcome::DomainExit { steps: 0 }),
            };
            iterate(
                |x| apply_body(body, var, x, env, &mut locals, policy),
                &start,
                *count,
                policy,
            )
        }
        _ => match eval_scalar(expr, env, &mut locals, policy) {
            Ok(v) => IterOutcome::Value(v),
            Err(_) => IterOutcome::DomainExit { steps: 0 },
        },
    })
}

fn check_scope(expr: &Expr, env: &Env, bound: &mut Vec<String>) -> Result<(), EvalError> {
    match expr {
        Expr::Num(_) => Ok(()),
        Expr::Var(name) => {
            if bound.iter().any(|b| b == name) || env.get(name).is_some() {
                Ok(())
            } else {
                Err(EvalError::Unbound(name.clone()))
            }
        }
        Expr::Unary(_, e) | Expr::Call(_, e) => check_scope(e, env, bound),
        Expr::Binary(_, lhs, rhs) => {
            check_scope(lhs, env, bound)?;
            check_scope(rhs, env, bound)
        }
        Expr::Iteral {
            var, init, body, ..
        } => {
            check_scope(init, env, bound)?;
            bound.push(var.clone());
            let result = check_scope(body, env, bound);
            bound.pop();
            result
        }
    }
}

fn apply_body(
    body: &Expr,
    var: &str,
    x: &Scalar,
    env: &Env,
    locals: &mut Vec<(String, Scalar)>,
    policy: &ConvergencePolicy,
) -> Result<Scalar, NumericError> {
    locals.push((var.to_string(), x.clone()));
    let result = eval_scalar(body, env, locals, policy);
    locals.pop();
    result
}

fn eval_scalar(
    expr: &Expr,
    env: &Env,
    locals: &mut Vec<(String, Scalar)>,
    policy: &ConvergencePolicy,
) -> Result<Scalar, NumericError> {
    match expr {
        Expr::Num(s) => Ok(s.clone()),
        Expr::Var(name) => {
            let local = locals
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone());
            Ok(local
                .or_else(|| env.get(name).cloned())
                .expect("scope was checked before evaluation"))
        }
        Expr::Unary(UnaryOp::Neg, e) => Ok(eval_scalar(e, env, locals, policy)?.neg()),
        Expr::Binary(op, lhs, rhs) => {
            let a = eval_scalar(lhs, env, locals, policy)?;
            let b = eval_scalar(rhs, env, locals, policy)?;
            match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.div(&b),
                BinOp::Pow => a.pow(&b),
            }
        }
        Expr::Call(func, e) => {
            let v = eval_scalar(e, env, locals, policy)?;
            match func {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Exp => v.exp(),
                Func::Abs => v.abs(),
                Func::Sqrt => v.sqrt(),
            }
        }
        Expr::Iteral {
            var,
            init,
            count,
            body,
        } => {
            let start = eval_scalar(init, env, locals, policy)?;
            let outcome = iterate(
                |x| apply_body(body, var, x, env, locals, policy),
                &start,
                *count,
                policy,
            );
            // Used as a subexpression, an iteral must stand for a value.
            outcome.into_value().ok_or(NumericError::NoValue)
        }
    }
}
