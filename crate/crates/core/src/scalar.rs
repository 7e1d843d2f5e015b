//! The numeric tower evaluation runs on: exact arbitrary-precision integers,
//! 64-bit reals, and complex numbers built from pairs of 64-bit floats.
//!
//! Values stay exact as long as every operand is an integer and the operation
//! is one of `+`, `-`, `*`, or `^` with a nonnegative exponent. Division, the
//! transcendental calls, and any float operand promote the result to the float
//! levels of the tower (`Int` < `Real` < `Complex`). The square root of a
//! negative real and the power of a negative base with a fractional exponent
//! promote to `Complex` instead of producing a NaN.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest exponent accepted by exact integer `^`; keeps the evaluator total
/// instead of attempting multi-gigabyte powers.
pub const MAX_EXACT_EXPONENT: u64 = 1_000_000;

/// Largest exact power result, in bits (8 MiB of magnitude). Towers like
/// `(2^999999)^999999` would otherwise allocate without bound.
pub const MAX_EXACT_POWER_BITS: u64 = 1 << 26;

/// Why an arithmetic step could not produce a value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent exceeds exact-arithmetic limit of {MAX_EXACT_EXPONENT}")]
    ExponentTooLarge,
    #[error("exact power would exceed {MAX_EXACT_POWER_BITS} bits")]
    PowerTooLarge,
    #[error("operation produced a NaN")]
    NotANumber,
    #[error("nested iteration produced no value")]
    NoValue,
}

/// A value in the tower. Ordering of variants matches promotion order.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Int(BigInt),
    Real(f64),
    Complex(Complex64),
}

impl Scalar {
    pub fn int<T: Into<BigInt>>(v: T) -> Self {
        Scalar::Int(v.into())
    }

    /// The imaginary unit, the only complex literal in the surface syntax.
    pub fn imaginary_unit() -> Self {
        Scalar::Complex(Complex64::new(0.0, 1.0))
    }

    pub fn is_nan(&self) -> bool {
        match self {
            Scalar::Int(_) => false,
            Scalar::Real(r) => r.is_nan(),
            Scalar::Complex(z) => z.re.is_nan() || z.im.is_nan(),
        }
    }

    /// Modulus used for divergence checks: |n| for integers (saturating to
    /// +inf when the integer no longer fits an f64), |r|, or the complex norm.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Int(n) => n.to_f64().unwrap_or(f64::INFINITY).abs(),
            Scalar::Real(r) => r.abs(),
            Scalar::Complex(z) => z.norm(),
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Int(n) => n.to_f64(),
            Scalar::Real(r) => Some(*r),
            Scalar::Complex(z) if z.im == 0.0 => Some(z.re),
            Scalar::Complex(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Int(n) => Complex64::new(n.to_f64().unwrap_or(f64::INFINITY), 0.0),
            Scalar::Real(r) => Complex64::new(*r, 0.0),
            Scalar::Complex(z) => *z,
        }
    }

    /// |self - other| as an f64; +inf when the difference itself overflows
    /// (two infinities of the same sign cancel to NaN, reported as "far").
    pub fn distance(&self, other: &Scalar) -> f64 {
        let d = match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                return (a - b).to_f64().unwrap_or(f64::INFINITY).abs()
            }
            _ => self.to_complex() - other.to_complex(),
        };
        let n = d.norm();
        if n.is_nan() {
            f64::INFINITY
        } else {
            n
        }
    }

    fn check(v: Scalar) -> Result<Scalar, NumericError> {
        if v.is_nan() {
            Err(NumericError::NotANumber)
        } else {
            Ok(v)
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        Self::check(match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a + b),
            (a, b) => promoted(
                a,
                b,
                |x, y| Scalar::Real(x + y),
                |x, y| Scalar::Complex(x + y),
            ),
        })
    }

    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        Self::check(match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a - b),
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a - b),
            (a, b) => promoted(
                a,
                b,
                |x, y| Scalar::Real(x - y),
                |x, y| Scalar::Complex(x - y),
            ),
        })
    }

    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        Self::check(match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a * b),
            (a, b) => promoted(
                a,
                b,
                |x, y| Scalar::Real(x * y),
                |x, y| Scalar::Complex(x * y),
            ),
        })
    }

    /// Division always leaves the exact level: integer operands are promoted
    /// to reals first, so `1/2` is `0.5`.
    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        let zero = match rhs {
            Scalar::Int(b) => b.is_zero(),
            Scalar::Real(b) => *b == 0.0,
            Scalar::Complex(b) => b.norm_sqr() == 0.0,
        };
        if zero {
            return Err(NumericError::DivisionByZero);
        }
        Self::check(promoted(
            self,
            rhs,
            |x, y| Scalar::Real(x / y),
            |x, y| Scalar::Complex(x / y),
        ))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(n) => Scalar::Int(-n),
            Scalar::Real(r) => Scalar::Real(-r),
            Scalar::Complex(z) => Scalar::Complex(-z),
        }
    }

    pub fn pow(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        if let (Scalar::Int(a), Scalar::Int(b)) = (self, rhs) {
            if !b.is_negative() {
                let e = b.to_u64().ok_or(NumericError::ExponentTooLarge)?;
                if e > MAX_EXACT_EXPONENT {
                    return Err(NumericError::ExponentTooLarge);
                }
                if a.bits().saturating_mul(e) > MAX_EXACT_POWER_BITS {
                    return Err(NumericError::PowerTooLarge);
                }
                return Ok(Scalar::Int(Pow::pow(a, e)));
            }
        }
        let v = match (self.to_f64(), rhs.to_f64()) {
            (Some(base), Some(exp)) => {
                if base < 0.0 && exp.fract() != 0.0 {
                    Scalar::Complex(Complex64::new(base, 0.0).powc(Complex64::new(exp, 0.0)))
                } else {
                    Scalar::Real(base.powf(exp))
                }
            }
            _ => Scalar::Complex(self.to_complex().powc(rhs.to_complex())),
        };
        Self::check(v)
    }

    pub fn sin(&self) -> Result<Scalar, NumericError> {
        self.float_fn(f64::sin, Complex64::sin)
    }

    pub fn cos(&self) -> Result<Scalar, NumericError> {
        self.float_fn(f64::cos, Complex64::cos)
    }

    pub fn exp(&self) -> Result<Scalar, NumericError> {
        self.float_fn(f64::exp, Complex64::exp)
    }

    /// `sqrt(-4)` is `2i`, not a NaN.
    pub fn sqrt(&self) -> Result<Scalar, NumericError> {
        let v = match self {
            Scalar::Complex(z) => Scalar::Complex(z.sqrt()),
            other => {
                let r = other.to_f64().expect("Int and Real always project to f64");
                if r < 0.0 {
                    Scalar::Complex(Complex64::new(0.0, (-r).sqrt()))
                } else {
                    Scalar::Real(r.sqrt())
                }
            }
        };
        Self::check(v)
    }

    /// Absolute value; stays exact on integers, takes the modulus of a complex.
    pub fn abs(&self) -> Result<Scalar, NumericError> {
        Self::check(match self {
            Scalar::Int(n) => Scalar::Int(n.abs()),
            Scalar::Real(r) => Scalar::Real(r.abs()),
            Scalar::Complex(z) => Scalar::Real(z.norm()),
        })
    }

    fn float_fn(
        &self,
        real: fn(f64) -> f64,
        complex: fn(Complex64) -> Complex64,
    ) -> Result<Scalar, NumericError> {
        let v = match self {
            Scalar::Complex(z) => Scalar::Complex(complex(*z)),
            other => Scalar::Real(real(
                other.to_f64().expect("Int and Real always project to f64"),
            )),
        };
        Self::check(v)
    }
}

fn promoted(
    a: &Scalar,
    b: &Scalar,
    real: impl Fn(f64, f64) -> Scalar,
    complex: impl Fn(Complex64, Complex64) -> Scalar,
) -> Scalar {
    match (a, b) {
        (Scalar::Complex(_), _) | (_, Scalar::Complex(_)) => {
            complex(a.to_complex(), b.to_complex())
        }
        _ => real(
            a.to_f64().expect("Int and Real always project to f64"),
            b.to_f64().expect("Int and Real always project to f64"),
        ),
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Real(r) => write!(f, "{r}"),
            Scalar::Complex(z) => write!(f, "{z}"),
        }
    }
}
