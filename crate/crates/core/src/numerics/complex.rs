use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use super::Scalar;

/// Complex number over `rug::Float` (the system MPFR build has no MPC).
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn with_val(prec: u32, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn real(x: &Float) -> Self {
        Complex {
            re: x.clone(),
            im: Float::new(x.prec()),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let den = Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref());
        Complex {
            re: Float::with_val(p, &self.re / &den),
            im: Float::with_val(p, -(Float::with_val(p, &self.im / &den))),
        }
    }

    pub fn div(&self, o: &Complex) -> Self {
        self.mul_ref(&o.recip())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(17);
        let sign = if self.im.is_sign_negative() { "-" } else { "+" };
        let im = Float::with_val(self.prec(), self.im.abs_ref());
        write!(
            f,
            "{} {} {}i",
            self.re.to_string_radix(10, Some(d)),
            sign,
            im.to_string_radix(10, Some(d))
        )
    }
}

impl Scalar for Complex {
    fn zero(prec: u32) -> Self {
        Complex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }
    fn from_real(x: &Float) -> Self {
        Complex::real(x)
    }
    fn prec(&self) -> u32 {
        self.re.prec()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        Complex {
            re: rr - ii,
            im: ri + ir,
        }
    }
    fn mul_real(&self, r: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * r),
            im: Float::with_val(p, &self.im * r),
        }
    }
    fn div_real(&self, r: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re / r),
            im: Float::with_val(p, &self.im / r),
        }
    }
    fn magnitude(&self) -> Float {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        self.add_ref(o)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        self.sub_ref(o)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        self.mul_ref(o)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, -&self.re),
            im: Float::with_val(p, -&self.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_inverts_multiplication() {
        let a = Complex::with_val(128, 1.5, -2.0);
        let b = Complex::with_val(128, -0.25, 3.0);
        let back = (&a * &b).div(&b);
        let err = (&back - &a).abs();
        assert!(err < 1e-35);
    }
}
