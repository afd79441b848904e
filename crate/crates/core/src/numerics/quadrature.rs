use rug::Float;

use super::special::pi;
use super::PrecisionContext;

/// Integration domain.
#[derive(Debug, Clone)]
pub enum Interval {
    /// `[a, b]` with `a < b`.
    Finite(Float, Float),
    /// `[a, +inf)`, mapped by `x = a + e^u` onto the real line.
    HalfLine(Float),
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Float,
    /// Difference between the last two refinement levels.
    pub error_estimate: Float,
    /// `false` means the refinement never met `tail_tol`: treat as inconclusive.
    pub converged: bool,
    pub levels: usize,
    pub evaluations: usize,
}

const MAX_LEVEL: usize = 12;

/// Point and weight of the transformed integrand at parameter `t`.
fn node(interval: &Interval, t: &Float, half_pi: &Float, p: u32) -> Option<(Float, Float)> {
    match interval {
        Interval::HalfLine(a) => {
            // u = sinh t, x = a + e^u, dx = e^u cosh t dt
            let u = Float::with_val(p, t.sinh_ref());
            let eu = Float::with_val(p, u.exp_ref());
            if !eu.is_finite() || eu.is_zero() {
                return None;
            }
            let x = Float::with_val(p, a + &eu);
            let w = eu * Float::with_val(p, t.cosh_ref());
            Some((x, w))
        }
        Interval::Finite(a, b) => {
            // tanh-sinh: x = c + d tanh(pi/2 sinh t)
            let d = Float::with_val(p, b - a) / 2u32;
            let s = Float::with_val(p, t.sinh_ref()) * half_pi;
            let s_abs = Float::with_val(p, s.abs_ref());
            let e = Float::with_val(p, -Float::with_val(p, &s_abs * 2u32)).exp();
            let one_e = Float::with_val(p, 1 + &e);
            let dist = Float::with_val(p, &d * &e) * 2u32 / &one_e;
            let x = if s.is_sign_negative() {
                Float::with_val(p, a + &dist)
            } else {
                Float::with_val(p, b - &dist)
            };
            if x <= *a || x >= *b {
                return None;
            }
            let w = d * half_pi * Float::with_val(p, t.cosh_ref()) * e * 4u32
                / Float::with_val(p, one_e.square_ref());
            Some((x, w))
        }
    }
}

/// Integral of `f` over `interval` by a double-exponential trapezoid rule
/// with step halving until successive levels agree to `tail_tol`.
pub fn quadrature<F>(mut f: F, interval: &Interval, ctx: &PrecisionContext) -> QuadratureResult
where
    F: FnMut(&Float) -> Float,
{
    let p = ctx.bits;
    let half_pi = pi(p) / 2u32;
    let eps = ctx.unit_roundoff();
    let (t_min, t_cap) = match interval {
        Interval::HalfLine(_) => (3.0, 12.0),
        Interval::Finite(..) => (1.0, 7.0),
    };
    let mut evaluations = 0usize;
    let mut g = |t: &Float, evaluations: &mut usize| -> Float {
        *evaluations += 1;
        match node(interval, t, &half_pi, p) {
            Some((x, w)) => {
                let v = f(&x) * w;
                if v.is_finite() {
                    v
                } else {
                    Float::new(p)
                }
            }
            None => Float::new(p),
        }
    };

    // Level 0 fixes the truncation range in t.
    let h0 = Float::with_val(p, 0.5);
    let mut sum = g(&Float::new(p), &mut evaluations);
    let mut ranges = [0usize; 2];
    for (dir, range) in ranges.iter_mut().enumerate() {
        let mut small_run = 0;
        let mut j = 1usize;
        loop {
            let mut t = Float::with_val(p, &h0 * j as u32);
            if dir == 1 {
                t = -t;
            }
            let v = g(&t, &mut evaluations);
            let negligible = Float::with_val(p, v.abs_ref()) <= Float::with_val(p, sum.abs_ref()) * &eps;
            sum += &v;
            let tf = j as f64 * 0.5;
            if negligible && tf >= t_min {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 3 || tf >= t_cap {
                *range = j;
                break;
            }
            j += 1;
        }
    }
    let mut integral = Float::with_val(p, &sum * &h0);
    let mut err = Float::with_val(p, rug::float::Special::Infinity);
    let mut h = h0;
    let mut converged = false;
    let mut levels = 0;
    for level in 1..=MAX_LEVEL {
        levels = level;
        h /= 2u32;
        let mult = 1usize << level;
        let mut new = Float::new(p);
        for (dir, &range) in ranges.iter().enumerate() {
            let last = range * mult;
            let mut k = 1usize;
            while k < last {
                let mut t = Float::with_val(p, &h * k as u32);
                if dir == 1 {
                    t = -t;
                }
                new += g(&t, &mut evaluations);
                k += 2;
            }
        }
        let next = Float::with_val(p, &integral / 2u32) + Float::with_val(p, &new * &h);
        err = Float::with_val(p, &next - &integral).abs();
        integral = next;
        let scale = Float::with_val(p, integral.abs_ref()).max(&eps);
        if level >= 3 && err <= Float::with_val(p, &scale * &ctx.tol()) {
            converged = true;
            break;
        }
    }
    QuadratureResult {
        value: integral,
        error_estimate: err,
        converged,
        levels,
        evaluations,
    }
}
