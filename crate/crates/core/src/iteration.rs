//! The iteration engine: apply a self-map `f` to an initial value `n` times,
//! or keep going until the orbit settles, blows up, or repeats.
//!
//! Iterating zero times returns the initial value for every map, including
//! partial ones — `f` is never called. A map signals a domain exit (division
//! by zero and friends) by returning an error; the engine reports how many
//! steps completed instead of aborting, so partial orbits stay inspectable.

use crate::scalar::{NumericError, Scalar};
use num_bigint::BigInt;
use std::collections::HashMap;

/// Number of iterations to perform: exactly `n`, or unbounded with the
/// stopping rules of a [`ConvergencePolicy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterCount {
    Finite(u64),
    Unbounded,
}

/// Stopping rules for [`IterCount::Unbounded`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePolicy {
    /// Converged once |x_{t+1} - x_t| < eps.
    pub eps: f64,
    /// Diverged once |x_t| > bailout.
    pub bailout: f64,
    /// Give up (reported as diverged) after this many steps.
    pub max_steps: u64,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        ConvergencePolicy {
            eps: 1e-12,
            bailout: 1e150,
            max_steps: 1_000_000,
        }
    }
}

/// How an iteration run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum IterOutcome {
    /// A finite count completed; carries f^n(v).
    Value(Scalar),
    /// Consecutive values came within eps of each other.
    Converged { value: Scalar, steps: u64 },
    /// Modulus exceeded the bailout radius, or max_steps ran out.
    Diverged { steps: u64 },
    /// An exact repeat of an earlier value (exact-integer orbits only).
    /// `entry + period` is the step at which the repeat was seen.
    Cycle { entry: u64, period: u64 },
    /// The map left its domain after `steps` successful steps.
    DomainExit { steps: u64 },
}

impl IterOutcome {
    /// The scalar this outcome stands for, when it stands for one.
    pub fn value(&self) -> Option<&Scalar> {
        match self {
            IterOutcome::Value(v) | IterOutcome::Converged { value: v, .. } => Some(v),
            _ => None,
        }
    }

    pub fn into_value(self) -> Option<Scalar> {
        match self {
            IterOutcome::Value(v) | IterOutcome::Converged { value: v, .. } => Some(v),
            _ => None,
        }
    }
}

/// An iteration sequence (splinter): `values[0]` is the initial value and
/// `values.len()` is always one more than the number of steps taken.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub values: Vec<Scalar>,
    pub outcome: IterOutcome,
}

/// Iterate `f` from `start`.
///
/// `Finite(n)` applies `f` exactly `n` times and yields `Value(f^n(start))`.
/// `Unbounded` walks until the policy declares convergence or divergence, an
/// exact-integer value repeats (a cycle), or the step budget runs out, which
/// is reported as `Diverged` since the orbit neither settled nor blew up.
pub fn iterate<F>(
    mut f: F,
    start: &Scalar,
    count: IterCount,
    policy: &ConvergencePolicy,
) -> IterOutcome
where
    F: FnMut(&Scalar) -> Result<Scalar, NumericError>,
{
    match count {
        IterCount::Finite(n) => {
            let mut x = start.clone();
            for step in 0..n {
                match f(&x) {
                    Ok(y) if !y.is_nan() => x = y,
                    _ => return IterOutcome::DomainExit { steps: step },
                }
            }
            IterOutcome::Value(x)
        }
        IterCount::Unbounded => {
            let mut seen: Option<HashMap<BigInt, u64>> = match start {
                Scalar::Int(n) => Some(HashMap::from([(n.clone(), 0)])),
                _ => None,
            };
            let mut x = start.clone();
            for step in 1..=policy.max_steps {
                let y = match f(&x) {
                    Ok(y) if !y.is_nan() => y,
                    _ => return IterOutcome::DomainExit { steps: step - 1 },
                };
                if y.magnitude() > policy.bailout {
                    return IterOutcome::Diverged { steps: step };
                }
                if y.distance(&x) < policy.eps {
                    return IterOutcome::Converged {
                        value: y,
                        steps: step,
                    };
                }
                if let (Some(map), Scalar::Int(n)) = (seen.as_mut(), &y) {
                    if let Some(&entry) = map.get(n) {
                        return IterOutcome::Cycle {
                            entry,
                            period: step - entry,
                        };
                    }
                    map.insert(n.clone(), step);
                }
                x = y;
            }
            IterOutcome::Diverged {
                steps: policy.max_steps,
            }
        }
    }
}

/// The orbit `(v, f(v), ..., f^n(v))`, truncated early on domain exit; the
/// outcome mirrors what [`iterate`] would report for the same arguments.
pub fn splinter<F>(mut f: F, start: &Scalar, n: u64) -> Orbit
where
    F: FnMut(&Scalar) -> Result<Scalar, NumericError>,
{
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(start.clone());
    for step in 0..n {
        match f(values.last().expect("orbit is never empty")) {
            Ok(y) if !y.is_nan() => values.push(y),
            _ => {
                return Orbit {
                    values,
                    outcome: IterOutcome::DomainExit { steps: step },
                };
            }
        }
    }
    let outcome = IterOutcome::Value(values.last().expect("orbit is never empty").clone());
    Orbit { values, outcome }
}

/// Least `m <= m_max` with `f^m(v) = v` while `f^k(v) != v` for `0 < k < m`.
///
/// Equality is exact between integers and within `policy.eps` otherwise.
/// Returns `None` when no such order exists within the bound or the orbit
/// exits the domain first.
pub fn periodic_order<F>(
    mut f: F,
    v: &Scalar,
    m_max: u64,
    policy: &ConvergencePolicy,
) -> Option<u64>
where
    F: FnMut(&Scalar) -> Result<Scalar, NumericError>,
{
    let mut x = v.clone();
    for m in 1..=m_max {
        x = match f(&x) {
            Ok(y) if !y.is_nan() => y,
            _ => return None,
        };
        let back = match (&x, v) {
            (Scalar::Int(a), Scalar::Int(b)) => a == b,
            _ => x.distance(v) <= policy.eps,
        };
        if back {
            return Some(m);
        }
    }
    None
}
