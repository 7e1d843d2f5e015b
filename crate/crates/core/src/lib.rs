//! Engine for iteration of functions: apply a self-map to an initial value a
//! fixed or unbounded number of times, and everything that falls out of doing
//! that with exact integers.
//!
//! The crate is organised around one idea — the *iteral* `I[x=v, n=k](f(x))`,
//! the value obtained by applying `f` to `v` exactly `k` times (`k = 0` returns
//! `v` untouched) — and ships:
//!
//! * [`iteration`] — the generic engine: values, orbits (splinters), and
//!   convergence/divergence/cycle diagnosis;
//! * [`dsl`] — a textual surface syntax with a recursive-descent parser,
//!   evaluator, and canonical formatter;
//! * [`sieve`] — the binary position-parity sieve that splits the nonnegative
//!   integers into named arithmetic progressions `EO_kO` / `EO_lE_mE`, with the
//!   exact `(k, p)` / `(m, l, p)` coordinate maps;
//! * [`collatz`] — `(3x+1)/2` and `x/2` dynamics expressed on those
//!   coordinates, plus the `oneness` step-by-step trace;
//! * [`dynamics`] — numeric demos: logistic orbits, escape-time grids for
//!   Mandelbrot/Julia sets, and the Lorenz double-approximation integrator;
//! * [`abc`] — a seeded simulator for the a-b-c tick process (session waiting
//!   times, intraday price increments, inter-session increments).
//!
//! Everything is pure and immutable after construction; with the `parallel`
//! feature (default) the escape-time renderer fans pixels out over rayon while
//! keeping output bit-identical to sequential row-major evaluation.

pub mod abc;
pub mod collatz;
pub mod dsl;
pub mod dynamics;
pub mod iteration;
pub mod rng;
pub mod scalar;
pub mod sieve;

/// Arbitrary-precision nonnegative integer; every sieve and Collatz quantity.
pub type Natural = num_bigint::BigUint;

pub use num_complex::Complex64;

pub use iteration::{
    iterate, periodic_order, splinter, ConvergencePolicy, IterCount, IterOutcome, Orbit,
};
pub use scalar::{NumericError, Scalar};
