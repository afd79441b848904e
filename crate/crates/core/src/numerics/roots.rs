use std::cmp::Ordering;

use rug::Float;

use super::{pow2, PrecisionContext};
use crate::error::{Error, Result};

fn sign(x: &Float) -> Option<Ordering> {
    x.cmp0()
}

/// Width below which the bracket counts as resolved: 2^(8-bits)·max(1, |x|).
fn resolved(a: &Float, b: &Float, bits: u32) -> bool {
    let p = a.prec().max(bits);
    let width = Float::with_val(p, b - a).abs();
    let mut scale = Float::with_val(p, a.abs_ref());
    let bb = Float::with_val(p, b.abs_ref());
    if bb > scale {
        scale = bb;
    }
    if scale < 1 {
        scale = Float::with_val(p, 1);
    }
    width <= scale * pow2(p, 8 - bits as i32)
}

/// Root of `f` in the bracket `[lo, hi]` where `f(lo)` and `f(hi)` differ in
/// sign. Illinois-modified false position, with a bisection step whenever the
/// bracket fails to halve. Deterministic for a given precision.
pub fn bracketed_root<F>(mut f: F, lo: &Float, hi: &Float, ctx: &PrecisionContext) -> Result<Float>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let p = ctx.bits;
    let (mut a, mut b) = if lo <= hi {
        (Float::with_val(p, lo), Float::with_val(p, hi))
    } else {
        (Float::with_val(p, hi), Float::with_val(p, lo))
    };
    let mut fa = f(&a)?;
    let mut fb = f(&b)?;
    let (sa, sb) = match (sign(&fa), sign(&fb)) {
        (Some(Ordering::Equal), _) => return Ok(a),
        (_, Some(Ordering::Equal)) => return Ok(b),
        (Some(sa), Some(sb)) => (sa, sb),
        _ => return Err(Error::Domain("function value is NaN at bracket end".into())),
    };
    if sa == sb {
        return Err(Error::InvalidBracket(format!(
            "f({}) = {}, f({}) = {}",
            a.to_string_radix(10, Some(12)),
            fa.to_string_radix(10, Some(6)),
            b.to_string_radix(10, Some(12)),
            fb.to_string_radix(10, Some(6))
        )));
    }
    // Which endpoint was retained on the previous step (for the Illinois halving).
    let mut kept: Option<bool> = None;
    let max_iter = 8 * p as usize + 200;
    let mut prev_width = Float::with_val(p, &b - &a);
    for iter in 0..max_iter {
        if resolved(&a, &b, p) {
            break;
        }
        let width = Float::with_val(p, &b - &a);
        let force_bisect = iter % 4 == 3 || width > Float::with_val(p, &prev_width * 0.5f64);
        prev_width = width;
        let mut c = if force_bisect {
            Float::with_val(p, &a + &b) / 2u32
        } else {
            let num = Float::with_val(p, &a * &fb) - Float::with_val(p, &b * &fa);
            let den = Float::with_val(p, &fb - &fa);
            Float::with_val(p, num / den)
        };
        if !(c > a && c < b) {
            c = Float::with_val(p, &a + &b) / 2u32;
            if !(c > a && c < b) {
                break;
            }
        }
        let fc = f(&c)?;
        match sign(&fc) {
            Some(Ordering::Equal) => return Ok(c),
            None => return Err(Error::Domain("function value is NaN inside bracket".into())),
            Some(sc) => {
                if sc == sign(&fa).unwrap() {
                    a = c;
                    fa = fc;
                    if kept == Some(false) {
                        fb /= 2u32;
                    }
                    kept = Some(false);
                } else {
                    b = c;
                    fb = fc;
                    if kept == Some(true) {
                        fa /= 2u32;
                    }
                    kept = Some(true);
                }
            }
        }
    }
    if !resolved(&a, &b, p) {
        return Err(Error::Inconclusive(format!(
            "bracket did not shrink below tolerance after {max_iter} iterations"
        )));
    }
    Ok(Float::with_val(p, &a + &b) / 2u32)
}
