use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{pow2, PrecisionContext, Scalar};

/// Jacobi coefficients of x p_n = a_n p_{n+1} + b_n p_n + a_{n-1} p_{n-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    pub a: Vec<Float>,
    pub b: Vec<Float>,
}

impl RecurrenceCoefficients {
    pub fn new(a: Vec<Float>, b: Vec<Float>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Length(format!("{} a-coefficients but {} b-coefficients", a.len(), b.len())));
        }
        if let Some(i) = a.iter().position(|x| !(*x > 0)) {
            return Err(Error::Domain(format!("a_{i} is not positive")));
        }
        Ok(RecurrenceCoefficients { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.a.first().map_or(64, |x| x.prec())
    }

    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        RecurrenceCoefficients {
            a: self.a[..n].to_vec(),
            b: self.b[..n].to_vec(),
        }
    }
}

/// Orthonormal polynomials p_0..p_N and second-kind polynomials q_0..q_N
/// at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair<T> {
    pub p: Vec<T>,
    pub q: Vec<T>,
}

/// p_k(z), q_k(z) for k = 0..=n from the recurrence with p_{-1} = 0,
/// p_0 = 1, q_0 = 0, q_1 = 1/a_0. Needs n <= rc.len().
pub fn eval_pq<T: Scalar>(rc: &RecurrenceCoefficients, z: &T, n: usize) -> Result<PolynomialPair<T>> {
    if n > rc.len() {
        return Err(Error::Length(format!(
            "p_{n} needs {n} recurrence coefficients, only {} available",
            rc.len()
        )));
    }
    let prec = z.prec();
    let one = T::from_real(&Float::with_val(prec, 1));
    let mut p = Vec::with_capacity(n + 1);
    let mut q = Vec::with_capacity(n + 1);
    p.push(one);
    q.push(T::zero(prec));
    if n == 0 {
        return Ok(PolynomialPair { p, q });
    }
    let a0_inv = Float::with_val(prec, rc.a[0].recip_ref());
    let zb0 = z.sub_ref(&T::from_real(&rc.b[0]));
    p.push(zb0.mul_real(&a0_inv));
    q.push(T::from_real(&a0_inv));
    for k in 1..n {
        let zb = z.sub_ref(&T::from_real(&rc.b[k]));
        let next_p = zb.mul_ref(&p[k]).sub_ref(&p[k - 1].mul_real(&rc.a[k - 1])).div_real(&rc.a[k]);
        let next_q = zb.mul_ref(&q[k]).sub_ref(&q[k - 1].mul_real(&rc.a[k - 1])).div_real(&rc.a[k]);
        p.push(next_p);
        q.push(next_q);
    }
    Ok(PolynomialPair { p, q })
}

/// Real-argument convenience wrapper around [`eval_pq`].
pub fn eval_pq_real(rc: &RecurrenceCoefficients, x: &Float, n: usize) -> Result<PolynomialPair<Float>> {
    eval_pq(rc, x, n)
}

/// (Jc)_n = a_{n-1} c_{n-1} + b_n c_n + a_n c_{n+1} for a finitely supported
/// vector `c`. The output is one entry longer than the support of `c`.
pub fn jacobi_apply(rc: &RecurrenceCoefficients, c: &[Float]) -> Result<Vec<Float>> {
    let last = match c.iter().rposition(|x| !x.is_zero()) {
        Some(i) => i,
        None => return Ok(vec![]),
    };
    if last >= rc.len() {
        return Err(Error::Length(format!(
            "vector supported up to index {last} but only {} coefficients",
            rc.len()
        )));
    }
    let prec = c[0].prec().max(rc.bits());
    let mut out = Vec::with_capacity(last + 2);
    for n in 0..=last + 1 {
        let mut v = Float::new(prec);
        if n >= 1 {
            v += &rc.a[n - 1] * &c[n - 1];
        }
        if n <= last {
            v += &rc.b[n] * &c[n];
            if n < last {
                v += &rc.a[n] * &c[n + 1];
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Moments ⟨J^n e_0, e_0⟩ for n < count of the normalized measure
/// determined by `rc` (needs count <= 2·len + 1).
pub fn moments_from_recurrence(rc: &RecurrenceCoefficients, count: usize) -> Result<Vec<Float>> {
    if count > 2 * rc.len() + 1 {
        return Err(Error::Length(format!(
            "{count} moments need {} coefficients, got {}",
            count / 2,
            rc.len()
        )));
    }
    let prec = rc.bits();
    let mut vecs: Vec<Vec<Float>> = vec![vec![Float::with_val(prec, 1)]];
    let needed = count / 2;
    for k in 1..=needed {
        let next = jacobi_apply(rc, &vecs[k - 1])?;
        vecs.push(next);
    }
    let dot = |u: &[Float], v: &[Float]| {
        let mut acc = Float::new(prec);
        for (x, y) in u.iter().zip(v) {
            acc += x * y;
        }
        acc
    };
    Ok((0..count)
        .map(|n| dot(&vecs[n.div_ceil(2)], &vecs[n / 2]))
        .collect())
}

/// Number of zeros of p_n greater than `x` (sign changes of p_0(x)..p_n(x)).
pub fn zeros_above(rc: &RecurrenceCoefficients, n: usize, x: &Float) -> Result<usize> {
    let pp = eval_pq_real(rc, x, n)?;
    let mut changes = 0;
    let mut last_neg: Option<bool> = None;
    for v in &pp.p {
        if v.is_zero() {
            continue;
        }
        let neg = v.is_sign_negative();
        if let Some(prev) = last_neg {
            if prev != neg {
                changes += 1;
            }
        }
        last_neg = Some(neg);
    }
    Ok(changes)
}

/// Interval containing every zero of p_n (Gershgorin on the Jacobi matrix).
fn gershgorin(rc: &RecurrenceCoefficients, n: usize, prec: u32) -> (Float, Float) {
    let mut lo = Float::with_val(prec, rug::float::Special::Infinity);
    let mut hi = Float::with_val(prec, rug::float::Special::NegInfinity);
    for k in 0..n {
        let mut r = Float::new(prec);
        if k > 0 {
            r += &rc.a[k - 1];
        }
        if k + 1 < n {
            r += &rc.a[k];
        }
        let l = Float::with_val(prec, &rc.b[k] - &r);
        let h = Float::with_val(prec, &rc.b[k] + &r);
        if l < lo {
            lo = l;
        }
        if h > hi {
            hi = h;
        }
    }
    (lo, hi)
}

/// The j-th smallest zero (0-based) of p_n by bisection on the zero count.
fn kth_zero(rc: &RecurrenceCoefficients, n: usize, j: usize, lo: &Float, hi: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.bits;
    let mut a = Float::with_val(p, lo);
    let mut b = Float::with_val(p, hi);
    // invariant: zeros_above(a) > n-1-j >= zeros_above(b)
    let target = n - 1 - j;
    for _ in 0..(4 * p as usize + 400) {
        let scale = Float::with_val(p, a.abs_ref()).max(&Float::with_val(p, b.abs_ref())).max(&ctx.one());
        if Float::with_val(p, &b - &a) <= scale * pow2(p, 8 - p as i32) {
            break;
        }
        let mid = Float::with_val(p, &a + &b) / 2u32;
        if mid <= a || mid >= b {
            break;
        }
        if zeros_above(rc, n, &mid)? > target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Float::with_val(p, &a + &b) / 2u32)
}

/// All zeros of p_n in increasing order.
pub fn polynomial_zeros(rc: &RecurrenceCoefficients, n: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    if n == 0 {
        return Ok(vec![]);
    }
    if n > rc.len() {
        return Err(Error::Length(format!("p_{n} needs {n} coefficients, got {}", rc.len())));
    }
    let (lo, hi) = gershgorin(rc, n, ctx.bits);
    (0..n).map(|j| kth_zero(rc, n, j, &lo, &hi, ctx)).collect()
}

/// Smallest zero of p_n.
pub fn smallest_polynomial_zero(rc: &RecurrenceCoefficients, n: usize, ctx: &PrecisionContext) -> Result<Float> {
    if n == 0 || n > rc.len() {
        return Err(Error::Length(format!("p_{n} needs 1..={} ", rc.len())));
    }
    let (lo, hi) = gershgorin(rc, n, ctx.bits);
    kth_zero(rc, n, 0, &lo, &hi, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermite(n: usize, prec: u32) -> RecurrenceCoefficients {
        RecurrenceCoefficients::new(
            (0..n).map(|k| Float::with_val(prec, (k + 1) as u32).sqrt()).collect(),
            (0..n).map(|_| Float::new(prec)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn jacobi_on_first_basis_vector() {
        let rc = hermite(5, 128);
        let e0 = vec![Float::with_val(128, 1)];
        let out = jacobi_apply(&rc, &e0).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0], rc.b[0]);
        assert_eq!(out[1], rc.a[0]);
    }

    #[test]
    fn jacobi_rejects_support_beyond_coefficients() {
        let rc = hermite(3, 128);
        let c: Vec<Float> = (0..4).map(|_| Float::with_val(128, 1)).collect();
        assert!(matches!(jacobi_apply(&rc, &c), Err(Error::Length(_))));
    }

    #[test]
    fn eval_length_error() {
        let rc = hermite(3, 128);
        assert!(eval_pq_real(&rc, &Float::with_val(128, 1), 4).is_err());
        assert_eq!(eval_pq_real(&rc, &Float::with_val(128, 1), 3).unwrap().p.len(), 4);
    }

    #[test]
    fn gaussian_moments_from_hermite_recurrence() {
        let rc = hermite(6, 128);
        let s = moments_from_recurrence(&rc, 9).unwrap();
        let expect = [1, 0, 1, 0, 3, 0, 15, 0, 105];
        for (v, e) in s.iter().zip(expect) {
            assert!(Float::with_val(128, v - e).abs() < 1e-30);
        }
    }

    #[test]
    fn hermite_zeros() {
        // p_2 ∝ x^2 - 1, p_3 ∝ x^3 - 3x
        let ctx = PrecisionContext::default();
        let rc = hermite(4, 256);
        let z = polynomial_zeros(&rc, 3, &ctx).unwrap();
        let r3 = Float::with_val(256, 3).sqrt();
        assert!(Float::with_val(256, &z[0] + &r3).abs() < 1e-60);
        assert!(z[1].clone().abs() < 1e-60);
        assert!(Float::with_val(256, &z[2] - &r3).abs() < 1e-60);
        let s = smallest_polynomial_zero(&rc, 2, &ctx).unwrap();
        assert!(Float::with_val(256, &s + 1u32).abs() < 1e-60);
    }
}
