//! Arbitrary-precision numerical kernel: precision contexts, a small complex
//! type, series summation with tail control, bracketed root finding and
//! quadrature on finite and half-infinite intervals.

mod complex;
mod quadrature;
mod roots;
mod series;
pub mod special;

pub use complex::Complex;
pub use quadrature::{quadrature, Interval, QuadratureResult};
pub use roots::bracketed_root;
pub use series::{extrapolate_limit, sum_series, sum_terms, SummationMethod, SummationResult};

use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Working precision and truncation policy shared by every routine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    /// Mantissa bits of every intermediate `Float`.
    pub bits: u32,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Relative tolerance for truncation tails.
    pub tail_tol: f64,
    /// Ceiling of the precision ladder (retries double `bits` up to this).
    pub max_bits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: 256,
            max_terms: 4096,
            tail_tol: 1e-30,
            max_bits: 4096,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32, max_terms: usize, tail_tol: f64) -> Result<Self> {
        let ctx = PrecisionContext {
            bits,
            max_terms,
            tail_tol,
            max_bits: bits.max(4096),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < 64 {
            return Err(Error::Domain(format!("precision {} bits is below 64", self.bits)));
        }
        if self.max_terms < 8 {
            return Err(Error::Domain(format!("max_terms {} is below 8", self.max_terms)));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::Domain(format!("tail_tol {} outside (0, 1)", self.tail_tol)));
        }
        if self.max_bits < self.bits {
            return Err(Error::Domain("max_bits below bits".into()));
        }
        Ok(())
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        PrecisionContext {
            bits,
            max_bits: self.max_bits.max(bits),
            ..self.clone()
        }
    }

    pub fn with_tail_tol(&self, tail_tol: f64) -> Self {
        PrecisionContext {
            tail_tol,
            ..self.clone()
        }
    }

    /// Next rung of the precision ladder, if the ceiling allows one.
    pub fn escalated(&self) -> Option<Self> {
        let next = self.bits.checked_mul(2)?;
        (next <= self.max_bits).then(|| self.with_bits(next))
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits)
    }

    pub fn one(&self) -> Float {
        Float::with_val(self.bits, 1)
    }

    pub fn tol(&self) -> Float {
        Float::with_val(self.bits, self.tail_tol)
    }

    /// 2^-bits.
    pub fn unit_roundoff(&self) -> Float {
        pow2(self.bits, -(self.bits as i32))
    }

    /// Parse a decimal string at this precision.
    pub fn parse(&self, s: &str) -> Result<Float> {
        parse_float(s, self.bits)
    }
}

/// 2^e at the given precision.
pub fn pow2(prec: u32, e: i32) -> Float {
    let mut x = Float::with_val(prec, 1);
    x <<= e;
    x
}

pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    let s = s.trim();
    match s {
        "inf" | "+inf" | "infinity" => return Ok(Float::with_val(prec, rug::float::Special::Infinity)),
        "-inf" | "-infinity" => return Ok(Float::with_val(prec, rug::float::Special::NegInfinity)),
        _ => {}
    }
    let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// Lossless decimal rendering (reads back to the same value at the same precision).
pub fn to_decimal(x: &Float) -> String {
    x.to_string_radix(10, None)
}

/// Short decimal rendering for human-facing output.
pub fn to_decimal_digits(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

/// Arithmetic shared by real and complex evaluation paths.
pub trait Scalar: Clone + std::fmt::Debug {
    fn zero(prec: u32) -> Self;
    fn from_real(x: &Float) -> Self;
    fn prec(&self) -> u32;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn mul_real(&self, r: &Float) -> Self;
    fn div_real(&self, r: &Float) -> Self;
    fn magnitude(&self) -> Float;
    fn is_finite_value(&self) -> bool;
}

impl Scalar for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }
    fn from_real(x: &Float) -> Self {
        x.clone()
    }
    fn prec(&self) -> u32 {
        Float::prec(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn mul_real(&self, r: &Float) -> Self {
        Float::with_val(self.prec(), self * r)
    }
    fn div_real(&self, r: &Float) -> Self {
        Float::with_val(self.prec(), self / r)
    }
    fn magnitude(&self) -> Float {
        Float::with_val(self.prec(), self.abs_ref())
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        assert!(PrecisionContext::new(32, 100, 1e-10).is_err());
        assert!(PrecisionContext::new(128, 4, 1e-10).is_err());
        assert!(PrecisionContext::new(128, 100, 1.5).is_err());
        assert!(PrecisionContext::new(128, 100, 1e-10).is_ok());
    }

    #[test]
    fn ladder_stops_at_ceiling() {
        let ctx = PrecisionContext {
            max_bits: 512,
            ..PrecisionContext::default()
        };
        let up = ctx.escalated().unwrap();
        assert_eq!(up.bits, 512);
        assert!(up.escalated().is_none());
    }

    #[test]
    fn decimal_round_trip() {
        let ctx = PrecisionContext::default();
        let x = ctx.float(1) / ctx.float(3);
        let y = ctx.parse(&to_decimal(&x)).unwrap();
        assert_eq!(x, y);
    }
}
