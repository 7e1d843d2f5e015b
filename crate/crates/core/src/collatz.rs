//! `(3x+1)/2` and `x/2` dynamics on the sieve's residue classes.
//!
//! One `(3x+1)/2` step on an odd number with coordinates `(k, p)` strips an
//! `O` from its fixed name: `(k, p) -> (k-1, 3p+1)` while `k >= 1`, and the
//! `(k+1)`-th step lands on the even number `3^(k+1)(2p+1) - 1`. Halving an
//! even number with coordinates `(m, l, p)` exactly `m+1` times strips all
//! trailing `E`s and lands on the odd class `(l-1, p)` — `l = k+1` and `p`
//! are invariant under division by two.
//!
//! [`trace`] replays the whole walk down to one, one line per step, carrying
//! each value's radix rendering, residue class, and the value recomputed from
//! the class as a self-check. Whether every input reaches one is the open
//! conjecture; traces carry a step guard and report exhaustion distinctly
//! instead of asserting termination.

use crate::sieve::{classify, ResidueClass};
use crate::Natural;
use num_traits::{One, Pow, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollatzError {
    #[error("the walk is defined for positive integers only")]
    ZeroInput,
    #[error("radix {0} is outside 2..=36")]
    BadRadix(u32),
    #[error("value exceeds the 2^31 - 1 compatibility cap at step {step}")]
    CapExceeded { step: u64 },
}

/// Operation that produced a trace line: the input marker, `(3x+1)/2`, or
/// division by two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOp {
    In,
    ThreeX,
    D2,
}

impl fmt::Display for StepOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepOp::In => "IN",
            StepOp::ThreeX => "3X",
            StepOp::D2 => "D2",
        })
    }
}

/// Result of one walk step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// The value is one; the walk stops.
    Terminal,
    Next {
        value: Natural,
        op: StepOp,
    },
}

/// One step of the walk: one is terminal, even numbers halve, odd numbers
/// greater than one take `(3x+1)/2`. Zero is rejected.
pub fn step(n: &Natural) -> Result<Step, CollatzError> {
    if n.is_zero() {
        return Err(CollatzError::ZeroInput);
    }
    if n.is_one() {
        return Ok(Step::Terminal);
    }
    Ok(if n.bit(0) {
        Step::Next {
            value: (n * 3u32 + 1u32) >> 1u32,
            op: StepOp::ThreeX,
        }
    } else {
        Step::Next {
            value: n >> 1u32,
            op: StepOp::D2,
        }
    })
}

/// One line of a trace: the step index (zero is the input line), the value,
/// the operation that produced it, its rendering in the requested radix, its
/// residue class, and the value recomputed from the class — always equal to
/// `value`, kept as the program's own correctness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub step: u64,
    pub value: Natural,
    pub op: StepOp,
    pub radix_repr: String,
    pub class: ResidueClass,
    pub recomputed: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub lines: Vec<TraceLine>,
    /// False when the step guard ran out before reaching one.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions {
    /// Radix for the rendition column, 2..=36.
    pub radix: u32,
    /// Guard against the open conjecture: stop after this many operations.
    pub max_steps: u64,
    /// Reject values above 2^31 - 1, reproducing the original program's cap.
    pub cap31: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            radix: 10,
            max_steps: 1_000_000,
            cap31: false,
        }
    }
}

/// The walk from `n` down to one, one [`TraceLine`] per value.
pub fn trace(n: &Natural, radix: u32) -> Result<Trace, CollatzError> {
    trace_opts(
        n,
        &TraceOptions {
            radix,
            ..TraceOptions::default()
        },
    )
}

pub fn trace_opts(n: &Natural, opts: &TraceOptions) -> Result<Trace, CollatzError> {
    if !(2..=36).contains(&opts.radix) {
        return Err(CollatzError::BadRadix(opts.radix));
    }
    if n.is_zero() {
        return Err(CollatzError::ZeroInput);
    }
    let cap = opts.cap31.then(|| (Natural::one() << 31u32) - 1u32);
    let line = |step: u64, value: &Natural, op: StepOp| {
        let class = classify(value);
        TraceLine {
            step,
            value: value.clone(),
            op,
            radix_repr: value.to_str_radix(opts.radix),
            recomputed: class.value(),
            class,
        }
    };
    let check_cap = |value: &Natural, step: u64| match &cap {
        Some(cap) if value > cap => Err(CollatzError::CapExceeded { step }),
        _ => Ok(()),
    };

    check_cap(n, 0)?;
    let mut lines = vec![line(0, n, StepOp::In)];
    let mut value = n.clone();
    let mut steps = 0;
    while !value.is_one() {
        if steps == opts.max_steps {
            return Ok(Trace {
                lines,
                resolved: false,
            });
        }
        if value.bit(0) {
            // The intermediate product 3x + 1 is what the original program's
            // cap guarded, not just the halved result.
            check_cap(&(&value * 3u32 + 1u32), steps + 1)?;
        }
        let (next, op) = match step(&value)? {
            Step::Next { value, op } => (value, op),
            Step::Terminal => unreachable!("loop guard keeps value > 1"),
        };
        steps += 1;
        lines.push(line(steps, &next, op));
        value = next;
    }
    Ok(Trace {
        lines,
        resolved: true,
    })
}

impl TraceLine {
    /// Descriptor shared by both output modes:
    /// `NAME : formula : (coords) : value`.
    fn descriptor(&self) -> String {
        match (self.class.render_name(), self.class.form()) {
            (Some(name), Some(form)) => {
                format!(
                    "{} : {} : {} : {}",
                    name,
                    form,
                    self.class.coords(),
                    self.recomputed
                )
            }
            // Unreachable in practice: traces only carry positive values.
            _ => format!("ZERO (EE\u{221e}E) : {}", self.recomputed),
        }
    }
}

/// Render a trace. The default mode separates the four leading fields with
/// single spaces; `exact` right-aligns the step and value columns to at least
/// two characters and the radix column to at least four, growing each with
/// its widest entry, which reproduces the original program's layout.
pub fn format_trace(trace: &Trace, exact: bool) -> String {
    let mut out = String::new();
    if exact {
        let width = |f: &dyn Fn(&TraceLine) -> usize, floor: usize| {
            trace.lines.iter().map(f).max().unwrap_or(0).max(floor)
        };
        let step_w = width(&|l| l.step.to_string().len(), 2);
        let value_w = width(&|l| l.value.to_string().len(), 2);
        let repr_w = width(&|l| l.radix_repr.len(), 4);
        for l in &trace.lines {
            out.push_str(&format!(
                "{:>step_w$} {:>value_w$} {} {:>repr_w$} {}\n",
                l.step,
                l.value.to_string(),
                l.op,
                l.radix_repr,
                l.descriptor(),
            ));
        }
    } else {
        for l in &trace.lines {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                l.step,
                l.value,
                l.op,
                l.radix_repr,
                l.descriptor(),
            ));
        }
    }
    out
}

/// Class transition of one `(3x+1)/2` step on an odd class: `(k, p)` becomes
/// `(k-1, 3p+1)` while `k >= 1`; at `k = 0` the result `6p + 2` is even and
/// is classified directly.
///
/// Panics when handed a class that is not odd.
pub fn odd_transition(c: &ResidueClass) -> ResidueClass {
    match c {
        ResidueClass::Odd { k, p } if *k >= 1 => ResidueClass::Odd {
            k: k - 1,
            p: p * 3u32 + 1u32,
        },
        ResidueClass::Odd { p, .. } => classify(&(p * 6u32 + 2u32)),
        other => panic!("odd_transition expects an odd class, got {other:?}"),
    }
}

/// The even number reached after exactly `k+1` `(3x+1)/2` steps from the odd
/// class `(k, p)`: `3^(k+1) (2p + 1) - 1`. Always even and strictly greater
/// than the starting value.
///
/// Panics when handed a class that is not odd.
pub fn odd_run_endpoint(c: &ResidueClass) -> Natural {
    match c {
        ResidueClass::Odd { k, p } => Natural::from(3u32).pow(k + 1) * (p * 2u32 + 1u32) - 1u32,
        other => panic!("odd_run_endpoint expects an odd class, got {other:?}"),
    }
}

/// Where `m+1` halvings take the even class `(m, l, p)`: the odd class
/// `(l-1, p)` — the same position `p`, the order carried by `l`.
///
/// Panics when handed a class that is not even.
pub fn even_strip(c: &ResidueClass) -> ResidueClass {
    match c {
        ResidueClass::Even { l, p, .. } => ResidueClass::Odd {
            k: l - 1,
            p: p.clone(),
        },
        other => panic!("even_strip expects an even class, got {other:?}"),
    }
}

/// `n = odd_part * 2^exponent` with `odd_part` odd; the two-adic split used
/// by the fate-of-even case analysis. Rejects zero.
pub fn odd2_decompose(n: &Natural) -> Result<(Natural, u64), CollatzError> {
    if n.is_zero() {
        return Err(CollatzError::ZeroInput);
    }
    let exponent = n.trailing_zeros().expect("nonzero");
    Ok((n >> exponent, exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn single_steps() {
        assert_eq!(
            step(&nat(9)).unwrap(),
            Step::Next {
                value: nat(14),
                op: StepOp::ThreeX
            }
        );
        assert_eq!(
            step(&nat(14)).unwrap(),
            Step::Next {
                value: nat(7),
                op: StepOp::D2
            }
        );
        assert_eq!(
            step(&nat(2)).unwrap(),
            Step::Next {
                value: nat(1),
                op: StepOp::D2
            }
        );
        assert_eq!(step(&nat(1)).unwrap(), Step::Terminal);
        assert_eq!(step(&nat(0)), Err(CollatzError::ZeroInput));
    }

    #[test]
    fn trace_values_for_three() {
        let t = trace(&nat(3), 10).unwrap();
        let values: Vec<u64> = t
            .lines
            .iter()
            .map(|l| u64::try_from(&l.value).unwrap())
            .collect();
        assert_eq!(values, vec![3, 5, 8, 4, 2, 1]);
        assert!(t.resolved);
    }

    #[test]
    fn trace_of_one_is_a_single_line() {
        let t = trace(&nat(1), 10).unwrap();
        assert_eq!(
            format_trace(&t, false),
            "0 1 IN 1 EO : 4p + 1 : (k=0, p=0) : 1\n"
        );
    }

    #[test]
    fn trace_lines_recompute_their_values() {
        let t = trace(&nat(27), 16).unwrap();
        for l in &t.lines {
            assert_eq!(l.value, l.recomputed, "step {}", l.step);
            assert_eq!(l.radix_repr, l.value.to_str_radix(16));
        }
    }

    #[test]
    fn bad_radix_is_rejected() {
        assert_eq!(trace(&nat(9), 1).unwrap_err(), CollatzError::BadRadix(1));
        assert_eq!(trace(&nat(9), 37).unwrap_err(), CollatzError::BadRadix(37));
    }

    #[test]
    fn step_guard_reports_unresolved() {
        let opts = TraceOptions {
            max_steps: 3,
            ..TraceOptions::default()
        };
        let t = trace_opts(&nat(27), &opts).unwrap();
        assert!(!t.resolved);
        assert_eq!(t.lines.len(), 4);
    }

    #[test]
    fn cap31_guards_the_three_x_intermediate() {
        // 2^30 + 1 is fine as input, but 3(2^30 + 1) + 1 > 2^31 - 1.
        let n = (Natural::one() << 30u32) + 1u32;
        let opts = TraceOptions {
            cap31: true,
            ..TraceOptions::default()
        };
        assert_eq!(
            trace_opts(&n, &opts).unwrap_err(),
            CollatzError::CapExceeded { step: 1 }
        );
        // Without the cap the same walk just runs.
        assert!(trace(&n, 10).unwrap().resolved);
        // The appendix-scale input is unaffected by the cap.
        assert!(trace_opts(&nat(9), &opts).unwrap().resolved);
    }

    #[test]
    fn odd_transitions_walk_down_the_orders() {
        assert_eq!(
            odd_transition(&ResidueClass::odd(2, 0u32)),
            ResidueClass::odd(1, 1u32)
        );
        assert_eq!(
            odd_transition(&ResidueClass::odd(1, 1u32)),
            ResidueClass::odd(0, 4u32)
        );
        assert_eq!(
            odd_transition(&ResidueClass::odd(0, 2u32)),
            ResidueClass::even(0, 3, 0u32)
        );
    }

    #[test]
    fn run_endpoints() {
        assert_eq!(odd_run_endpoint(&ResidueClass::odd(2, 0u32)), nat(26));
        assert_eq!(odd_run_endpoint(&ResidueClass::odd(0, 0u32)), nat(2));
        assert_eq!(odd_run_endpoint(&ResidueClass::odd(0, 2u32)), nat(14));
    }

    #[test]
    fn stripping_even_classes() {
        assert_eq!(
            even_strip(&ResidueClass::even(1, 3, 0u32)),
            ResidueClass::odd(2, 0u32)
        );
        assert_eq!(
            even_strip(&ResidueClass::even(0, 1, 0u32)),
            ResidueClass::odd(0, 0u32)
        );
        assert_eq!(
            even_strip(&ResidueClass::even(2, 1, 0u32)),
            ResidueClass::odd(0, 0u32)
        );
    }

    #[test]
    fn two_adic_decomposition() {
        assert_eq!(odd2_decompose(&nat(12)).unwrap(), (nat(3), 2));
        assert_eq!(odd2_decompose(&nat(7)).unwrap(), (nat(7), 0));
        assert_eq!(odd2_decompose(&nat(16)).unwrap(), (nat(1), 4));
        assert!(odd2_decompose(&nat(0)).is_err());
    }

    #[test]
    fn exact_format_reproduces_column_widths() {
        let t = trace(&nat(9), 3).unwrap();
        let text = format_trace(&t, true);
        let first = text.lines().next().unwrap();
        assert_eq!(first, " 0  9 IN  100 EO : 4p + 1 : (k=0, p=2) : 9");
        let last = text.lines().last().unwrap();
        assert_eq!(last, "13  1 D2    1 EO : 4p + 1 : (k=0, p=0) : 1");
    }
}
