//! The Nevanlinna matrix (A, B, C, D) of an indeterminate problem, the
//! determinacy classifier, the Friedrichs parameter, and the supports and
//! masses of N-extremal solutions.

mod classify;
mod support;

pub use classify::{classify, friedrichs_parameter, Determinacy, DeterminacyVerdict, StieltjesClass, StieltjesClassification};
pub use support::{
    interlaces, mass_at, nextremal_measure, nextremal_support, parameter_of_point, stieltjes_transform_check,
    MassEstimate, ScanGrid, ScanWindow, SupportScan,
};

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::moments::{eval_pq, eval_pq_real, RecurrenceCoefficients};
use crate::numerics::{parse_float, sum_terms, PrecisionContext, Scalar, SummationMethod};

/// A point t of the extended real line parametrizing the N-extremal solutions.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameter {
    Finite(Float),
    Infinite,
}

impl Parameter {
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Parameter::Infinite),
            other => {
                let v = parse_float(other, prec)?;
                if v.is_infinite() {
                    Ok(Parameter::Infinite)
                } else {
                    Ok(Parameter::Finite(v))
                }
            }
        }
    }

    pub fn finite(&self) -> Option<&Float> {
        match self {
            Parameter::Finite(t) => Some(t),
            Parameter::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Parameter::Infinite)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Finite(t) => write!(f, "{}", t.to_string_radix(10, Some(f.precision().unwrap_or(20)))),
            Parameter::Infinite => write!(f, "inf"),
        }
    }
}

/// A(z), B(z), C(z), D(z) with the truncation diagnostics.
#[derive(Debug, Clone)]
pub struct NevanlinnaQuadruple<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub terms_used: usize,
    /// Largest absolute tail estimate among the four series.
    pub tail_bound: Float,
    /// |AD - BC - 1|.
    pub identity_residual: Float,
    pub method: SummationMethod,
}

impl<T: Scalar> NevanlinnaQuadruple<T> {
    /// B + tD (D alone for t = ∞).
    pub fn denominator(&self, t: &Parameter) -> T {
        match t {
            Parameter::Finite(t) => self.b.add_ref(&self.d.mul_real(t)),
            Parameter::Infinite => self.d.clone(),
        }
    }

    /// A + tC (C alone for t = ∞).
    pub fn numerator(&self, t: &Parameter) -> T {
        match t {
            Parameter::Finite(t) => self.a.add_ref(&self.c.mul_real(t)),
            Parameter::Infinite => self.c.clone(),
        }
    }
}

/// A = z Σ q_k(0) q_k(z), B = -1 + z Σ q_k(0) p_k(z),
/// C = 1 + z Σ p_k(0) q_k(z), D = z Σ p_k(0) p_k(z),
/// summed over all available coefficients with tail estimation. Fails as
/// inconclusive when the tails do not close (typically a determinate
/// problem) or when AD - BC = 1 does not hold to the tail-scaled tolerance.
pub fn nevanlinna_eval<T: Scalar>(
    rc: &RecurrenceCoefficients,
    z: &T,
    ctx: &PrecisionContext,
) -> Result<NevanlinnaQuadruple<T>> {
    let prec = ctx.bits;
    let n = rc.len();
    if z.magnitude().is_zero() {
        let one = T::from_real(&ctx.one());
        return Ok(NevanlinnaQuadruple {
            a: T::zero(prec),
            b: T::zero(prec).sub_ref(&one),
            c: one,
            d: T::zero(prec),
            terms_used: n + 1,
            tail_bound: ctx.zero(),
            identity_residual: ctx.zero(),
            method: SummationMethod::Exact,
        });
    }
    let at0 = eval_pq_real(rc, &ctx.zero(), n)?;
    let atz = eval_pq(rc, z, n)?;
    let mut ta = Vec::with_capacity(n + 1);
    let mut tb = Vec::with_capacity(n + 1);
    let mut tc = Vec::with_capacity(n + 1);
    let mut td = Vec::with_capacity(n + 1);
    for k in 0..=n {
        ta.push(atz.q[k].mul_real(&at0.q[k]));
        tb.push(atz.p[k].mul_real(&at0.q[k]));
        tc.push(atz.q[k].mul_real(&at0.p[k]));
        td.push(atz.p[k].mul_real(&at0.p[k]));
    }
    let sums = [sum_terms(&ta, ctx), sum_terms(&tb, ctx), sum_terms(&tc, ctx), sum_terms(&td, ctx)];
    let zmag = z.magnitude();
    // Tails are judged against the scale of the whole quadruple: a single
    // sum passing through zero must not make its tail look large.
    let mut scale = ctx.one();
    for s in &sums {
        let m = Float::with_val(prec, s.value.magnitude() * &zmag) + 1u32;
        if m > scale {
            scale = m;
        }
    }
    let allowed_tail = Float::with_val(prec, &scale * &ctx.tol());
    let mut tail = ctx.zero();
    let mut method = SummationMethod::Geometric;
    for s in &sums {
        let closes = s.converged
            || (matches!(s.method, SummationMethod::Geometric | SummationMethod::Extrapolated)
                && Float::with_val(prec, &s.tail_bound * &zmag) <= allowed_tail);
        if !closes {
            return Err(Error::Inconclusive(format!(
                "Nevanlinna series tail did not close after {} terms (method {:?}, tail {}); the problem may be determinate",
                n + 1,
                s.method,
                s.tail_bound.to_string_radix(10, Some(4))
            )));
        }
        let t = Float::with_val(prec, &s.tail_bound * &zmag);
        if t > tail {
            tail = t;
        }
        if s.method == SummationMethod::Extrapolated {
            method = SummationMethod::Extrapolated;
        }
    }
    let one = T::from_real(&ctx.one());
    let a = z.mul_ref(&sums[0].value);
    let b = z.mul_ref(&sums[1].value).sub_ref(&one);
    let c = z.mul_ref(&sums[2].value).add_ref(&one);
    let d = z.mul_ref(&sums[3].value);
    let ad = a.mul_ref(&d);
    let bc = b.mul_ref(&c);
    let residual = ad.sub_ref(&bc).sub_ref(&one).magnitude();
    let scale = Float::with_val(prec, ad.magnitude() + bc.magnitude()) + 1u32;
    let sum_mag = Float::with_val(prec, a.magnitude() + b.magnitude()) + c.magnitude() + d.magnitude();
    let allowed = Float::with_val(prec, &tail * &sum_mag) * 8u32
        + Float::with_val(prec, &scale * &crate::numerics::pow2(prec, -(prec as i32) / 2));
    if residual > allowed {
        return Err(Error::Inconclusive(format!(
            "AD - BC = 1 violated by {} (allowed {})",
            residual.to_string_radix(10, Some(4)),
            allowed.to_string_radix(10, Some(4))
        )));
    }
    Ok(NevanlinnaQuadruple {
        a,
        b,
        c,
        d,
        terms_used: n + 1,
        tail_bound: tail,
        identity_residual: residual,
        method,
    })
}
