use rug::Float;
use serde::{Deserialize, Serialize};

use super::{PrecisionContext, Scalar};

/// How a sum was closed off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationMethod {
    /// Finitely many nonzero terms; no tail.
    Exact,
    /// Geometric tail bound from the last three term ratios.
    Geometric,
    /// Polynomial extrapolation of partial sums in 1/N (algebraic tails).
    Extrapolated,
    /// Stopped without a usable tail estimate.
    Truncated,
    /// Terms do not decay fast enough to be summable.
    Divergent,
}

#[derive(Debug, Clone)]
pub struct SummationResult<T> {
    pub value: T,
    pub terms_used: usize,
    /// Absolute bound (or estimate, for extrapolated sums) on the neglected tail.
    pub tail_bound: Float,
    pub converged: bool,
    pub method: SummationMethod,
}

impl<T> SummationResult<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SummationResult<U> {
        SummationResult {
            value: f(self.value),
            terms_used: self.terms_used,
            tail_bound: self.tail_bound,
            converged: self.converged,
            method: self.method,
        }
    }
}

fn ratio(cur: &Float, prev: &Float) -> Float {
    let p = cur.prec();
    if prev.is_zero() {
        if cur.is_zero() {
            Float::new(p)
        } else {
            Float::with_val(p, rug::float::Special::Infinity)
        }
    } else {
        Float::with_val(p, cur / prev)
    }
}

/// Geometric tail |t|·r/(1−r) if the last three ratios are all below one.
fn geometric_tail(mags: &[Float]) -> Option<Float> {
    if mags.len() < 4 {
        return None;
    }
    let n = mags.len();
    let mut r = Float::new(mags[n - 1].prec());
    for i in n - 3..n {
        let ri = ratio(&mags[i], &mags[i - 1]);
        if !(ri < 1) {
            return None;
        }
        if ri > r {
            r = ri;
        }
    }
    let last = &mags[n - 1];
    let one_minus = Float::with_val(r.prec(), 1 - &r);
    Some(Float::with_val(r.prec(), last * &r) / one_minus)
}

/// Envelope version of [`geometric_tail`] for terms with isolated dips
/// (sign changes): block maxima M1 > M2 > M3 over the last three blocks of
/// four terms give the per-block ratio ρ and the tail bound 4·M3·ρ/(1-ρ).
fn block_geometric_tail(mags: &[Float]) -> Option<Float> {
    const BLOCK: usize = 4;
    let n = mags.len();
    if n < 3 * BLOCK {
        return None;
    }
    let block_max = |i: usize| {
        mags[n - (3 - i) * BLOCK..n - (2 - i) * BLOCK]
            .iter()
            .max_by(|a, b| a.partial_cmp(b).expect("magnitudes are not NaN"))
            .cloned()
            .expect("non-empty block")
    };
    let (m1, m2, m3) = (block_max(0), block_max(1), block_max(2));
    let r1 = ratio(&m2, &m1);
    let r2 = ratio(&m3, &m2);
    if !(r1 < 1 && r2 < 1) {
        return None;
    }
    let rho = if r1 > r2 { r1 } else { r2 };
    let one_minus = Float::with_val(rho.prec(), 1 - &rho);
    Some(Float::with_val(rho.prec(), &m3 * &rho) * BLOCK as u32 / one_minus)
}

fn small_enough(tail: &Float, value_mag: &Float, max_mag: &Float, ctx: &PrecisionContext) -> bool {
    let floor = Float::with_val(ctx.bits, max_mag * &ctx.unit_roundoff());
    let scale = if *value_mag > floor { value_mag.clone() } else { floor };
    *tail <= Float::with_val(ctx.bits, &scale * &ctx.tol())
}

/// Sum `term(0) + term(1) + ...` until a geometric tail bound is below
/// `tail_tol` relative to the sum (or to rounding noise of the largest term).
/// `term` returns `None` once the series is exhausted. Never fails:
/// non-convergence is reported through `converged`.
pub fn sum_series<T, G>(mut term: G, ctx: &PrecisionContext) -> SummationResult<T>
where
    T: Scalar,
    G: FnMut(usize) -> Option<T>,
{
    let mut value = T::zero(ctx.bits);
    let mut mags: Vec<Float> = Vec::with_capacity(8);
    let mut max_mag = Float::new(ctx.bits);
    let mut last_tail = Float::with_val(ctx.bits, rug::float::Special::Infinity);
    for k in 0..ctx.max_terms {
        let t = match term(k) {
            Some(t) => t,
            None => {
                return SummationResult {
                    value,
                    terms_used: k,
                    tail_bound: Float::new(ctx.bits),
                    converged: true,
                    method: SummationMethod::Exact,
                }
            }
        };
        value = value.add_ref(&t);
        let m = t.magnitude();
        if m > max_mag {
            max_mag = m.clone();
        }
        if mags.len() == 4 {
            mags.remove(0);
        }
        mags.push(m);
        if let Some(tail) = geometric_tail(&mags) {
            if small_enough(&tail, &value.magnitude(), &max_mag, ctx) {
                return SummationResult {
                    value,
                    terms_used: k + 1,
                    tail_bound: tail,
                    converged: true,
                    method: SummationMethod::Geometric,
                };
            }
            last_tail = tail;
        }
    }
    SummationResult {
        value,
        terms_used: ctx.max_terms,
        tail_bound: last_tail,
        converged: false,
        method: SummationMethod::Truncated,
    }
}

/// Least-squares slope of ln|t_n| against ln n over the last quarter of the terms.
fn algebraic_decay_exponent(mags: &[Float]) -> Option<f64> {
    let n = mags.len();
    let start = (3 * n) / 4;
    let pts: Vec<(f64, f64)> = (start.max(1)..n)
        .filter(|&i| !mags[i].is_zero())
        .map(|i| ((i as f64).ln(), Float::with_val(64, mags[i].ln_ref()).to_f64()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Some((m * sxy - sx * sy) / (m * sxx - sx * sx))
}

/// Neville evaluation at h = 0 of the interpolant through (h_i, y_i).
fn neville_at_zero<T: Scalar>(h: &[Float], y: &[T]) -> T {
    let mut p: Vec<T> = y.to_vec();
    let n = h.len();
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            let den = Float::with_val(h[i].prec(), &h[i] - &h[j]);
            let a = p[i].mul_real(&h[j]);
            let b = p[i + 1].mul_real(&h[i]);
            p[i] = b.sub_ref(&a).div_real(&den);
        }
    }
    p.swap_remove(0)
}

/// Extrapolate S_N -> S assuming S_N = S + c1/N + c2/N^2 + ...
/// Returns the estimate and the difference between two extrapolation orders.
/// Needs at least 24 terms of the sequence.
pub fn extrapolate_limit<T: Scalar>(partials: &[T], prec: u32) -> Option<(T, Float)> {
    let n = partials.len();
    if n < 24 {
        return None;
    }
    let order = 12.min(n / 4);
    let half = n / 2;
    let step = ((n - 1 - half) / order).max(1);
    let idx: Vec<usize> = (0..=order).map(|i| n - 1 - i * step).collect();
    let h: Vec<Float> = idx
        .iter()
        .map(|&i| Float::with_val(prec, 1) / Float::with_val(prec, i + 1))
        .collect();
    let y: Vec<T> = idx.iter().map(|&i| partials[i].clone()).collect();
    let full = neville_at_zero(&h, &y);
    let lower = neville_at_zero(&h[..order - 1], &y[..order - 1]);
    let err = full.sub_ref(&lower).magnitude();
    Some((full, err))
}

/// Sum a fixed list of terms, estimating the neglected tail. A geometric tail
/// (three-ratio test) is tried first; if the terms decay only algebraically
/// (faster than 1/n) the partial sums are extrapolated in 1/N.
pub fn sum_terms<T: Scalar>(terms: &[T], ctx: &PrecisionContext) -> SummationResult<T> {
    let prec = ctx.bits;
    let mut partials: Vec<T> = Vec::with_capacity(terms.len());
    let mut acc = T::zero(prec);
    let mut max_mag = Float::new(prec);
    let mut mags = Vec::with_capacity(terms.len());
    for t in terms {
        acc = acc.add_ref(t);
        partials.push(acc.clone());
        let m = t.magnitude();
        if m > max_mag {
            max_mag = m.clone();
        }
        mags.push(m);
    }
    let n = terms.len();
    if n == 0 {
        return SummationResult {
            value: acc,
            terms_used: 0,
            tail_bound: Float::new(prec),
            converged: true,
            method: SummationMethod::Exact,
        };
    }
    let tail_geo = if n >= 4 { geometric_tail(&mags[n - 4..]) } else { None };
    let tail_geo = match tail_geo {
        Some(t) if small_enough(&t, &acc.magnitude(), &max_mag, ctx) => Some(t),
        other => block_geometric_tail(&mags).or(other),
    };
    if let Some(tail) = &tail_geo {
        if small_enough(tail, &acc.magnitude(), &max_mag, ctx) {
            return SummationResult {
                value: acc,
                terms_used: n,
                tail_bound: tail.clone(),
                converged: true,
                method: SummationMethod::Geometric,
            };
        }
    }
    // Terms whose ratio tends to one decay algebraically; only then is the
    // 1/N extrapolation meaningful.
    let near_one = n >= 2 && !mags[n - 2].is_zero() && ratio(&mags[n - 1], &mags[n - 2]) > 0.9f64;
    let decay = algebraic_decay_exponent(&mags);
    if near_one && matches!(decay, Some(s) if s < -1.05) {
        if let Some((value, err)) = extrapolate_limit(&partials, prec) {
            let converged = small_enough(&err, &value.magnitude(), &max_mag, ctx);
            return SummationResult {
                value,
                terms_used: n,
                tail_bound: err,
                converged,
                method: SummationMethod::Extrapolated,
            };
        }
    }
    let divergent = matches!(decay, Some(s) if s >= -1.0) && (near_one || tail_geo.is_none());
    SummationResult {
        value: acc,
        terms_used: n,
        tail_bound: tail_geo.clone().unwrap_or_else(|| Float::with_val(prec, rug::float::Special::Infinity)),
        converged: false,
        method: if divergent {
            SummationMethod::Divergent
        } else if tail_geo.is_some() && !near_one {
            SummationMethod::Geometric
        } else {
            SummationMethod::Truncated
        },
    }
}
