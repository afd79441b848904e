//! q-calculus: q-Pochhammer symbols, Gaussian binomials, the Ramanujan
//! function Φ(x) = Σ (-1)^k q^{k²} x^k / (q;q)_k and its zeros.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{bracketed_root, sum_series, Complex, PrecisionContext, Scalar, SummationResult};

/// A base `q` with `0 < q < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QParameter(Float);

impl QParameter {
    pub fn new(q: Float) -> Result<Self> {
        if q > 0 && q < 1 {
            Ok(QParameter(q))
        } else {
            Err(Error::Domain(format!("q = {} is not in (0, 1)", q.to_string_radix(10, Some(10)))))
        }
    }

    pub fn from_f64(q: f64, ctx: &PrecisionContext) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("q = {q} is not in (0, 1)")));
        }
        Self::new(ctx.float(q))
    }

    pub fn value(&self) -> &Float {
        &self.0
    }

    /// q at the precision of `ctx` (exact when `q` was built from an f64).
    pub fn at(&self, ctx: &PrecisionContext) -> Float {
        Float::with_val(ctx.bits, &self.0)
    }

    /// log2(1/q).
    pub fn log2_inv(&self) -> f64 {
        -self.0.to_f64().log2()
    }
}

/// Length of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerLength {
    Finite(usize),
    Infinite,
}

/// (z; q)_n = Π_{k<n} (1 - z q^k). The infinite product stops once
/// |z| q^k drops below the unit roundoff.
pub fn qpochhammer(z: &Complex, q: &QParameter, n: PochhammerLength, ctx: &PrecisionContext) -> Complex {
    let p = ctx.bits;
    let qv = q.at(ctx);
    let eps = ctx.unit_roundoff();
    let one = Complex::real(&ctx.one());
    let mut acc = one.clone();
    let mut zq = Complex::new(Float::with_val(p, &z.re), Float::with_val(p, &z.im));
    let mut k = 0usize;
    loop {
        match n {
            PochhammerLength::Finite(m) if k >= m => break,
            PochhammerLength::Infinite if zq.abs() < eps => break,
            _ => {}
        }
        acc = acc.mul_ref(&one.sub_ref(&zq));
        zq = zq.mul_real(&qv);
        k += 1;
    }
    acc
}

/// Real-argument (z; q)_n.
pub fn qpochhammer_real(z: &Float, q: &QParameter, n: PochhammerLength, ctx: &PrecisionContext) -> Float {
    let p = ctx.bits;
    let qv = q.at(ctx);
    let eps = ctx.unit_roundoff();
    let mut acc = ctx.one();
    let mut zq = Float::with_val(p, z);
    let mut k = 0usize;
    loop {
        match n {
            PochhammerLength::Finite(m) if k >= m => break,
            PochhammerLength::Infinite if Float::with_val(p, zq.abs_ref()) < eps => break,
            _ => {}
        }
        acc *= Float::with_val(p, 1 - &zq);
        zq *= &qv;
        k += 1;
    }
    acc
}

/// (q; q)_k for k = 0..=n.
pub fn qfactorials(q: &QParameter, n: usize, ctx: &PrecisionContext) -> Vec<Float> {
    let qv = q.at(ctx);
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = ctx.one();
    let mut qk = ctx.one();
    out.push(acc.clone());
    for _ in 0..n {
        qk *= &qv;
        acc *= Float::with_val(ctx.bits, 1 - &qk);
        out.push(acc.clone());
    }
    out
}

/// Gaussian binomial [n, k]_q = Π_{i=1..k} (1 - q^{n-k+i}) / (1 - q^i).
pub fn gauss_binomial(n: i64, k: i64, q: &QParameter, ctx: &PrecisionContext) -> Result<Float> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::Domain(format!("Gaussian binomial [{n}, {k}] needs 0 <= k <= n")));
    }
    let p = ctx.bits;
    let qv = q.at(ctx);
    let k = k.min(n - k);
    let mut acc = ctx.one();
    for i in 1..=k {
        let num = Float::with_val(p, 1 - Float::with_val(p, (&qv).pow((n - k + i) as u32)));
        let den = Float::with_val(p, 1 - Float::with_val(p, (&qv).pow(i as u32)));
        acc *= num;
        acc /= den;
    }
    Ok(acc)
}

/// Extra working bits so the alternating sum Φ(x) keeps `ctx.bits` of
/// accuracy: the largest term is about 2^{(log2 x)² / (4 log2(1/q))}.
fn phi_guard_bits(x: &Float, q: &QParameter) -> u32 {
    let lx = Float::with_val(64, x.abs_ref()).log2().to_f64();
    if lx <= 0.0 || !lx.is_finite() {
        return 16;
    }
    (lx * lx / (4.0 * q.log2_inv())).ceil() as u32 + 16
}

fn phi_terms_sum(x: &Float, q: &QParameter, ctx: &PrecisionContext, derivative: bool) -> SummationResult<Float> {
    let work = ctx.with_bits(ctx.bits + phi_guard_bits(x, q));
    let p = work.bits;
    let qv = q.at(&work);
    let xv = Float::with_val(p, x);
    // term_k = (-1)^k q^{k²} x^k / (q;q)_k, built recursively
    let mut term = work.one();
    let mut qk = work.one(); // q^k
    let r = sum_series(
        |k| {
            if k > 0 {
                // term_k = -term_{k-1} · q^{2k-1} x / (1 - q^k)
                let q2km1 = Float::with_val(p, &qk * &qk) * &qv; // q^{2(k-1)+1}
                qk *= &qv;
                let den = Float::with_val(p, 1 - &qk);
                term *= q2km1;
                term *= &xv;
                term /= den;
                term = -Float::with_val(p, &term);
            }
            if derivative {
                // d/dx of term_{k} is k·term_k/x; shift so series starts at k=1
                if k == 0 {
                    return Some(Float::new(p));
                }
                Some(Float::with_val(p, &term * k as u32) / &xv)
            } else {
                Some(term.clone())
            }
        },
        &work,
    );
    r.map(|v| Float::with_val(ctx.bits, v))
}

/// Φ(x) with tail bound. Guard bits are added internally to absorb the
/// cancellation between the large alternating terms at large x.
pub fn ramanujan_phi(x: &Float, q: &QParameter, ctx: &PrecisionContext) -> SummationResult<Float> {
    phi_terms_sum(x, q, ctx, false)
}

/// Φ'(x) from the term-wise differentiated series (x ≠ 0).
pub fn ramanujan_phi_derivative(x: &Float, q: &QParameter, ctx: &PrecisionContext) -> Result<SummationResult<Float>> {
    if x.is_zero() {
        return Ok(SummationResult {
            value: Float::with_val(ctx.bits, -q.at(ctx) / Float::with_val(ctx.bits, 1 - q.at(ctx))),
            terms_used: 1,
            tail_bound: ctx.zero(),
            converged: true,
            method: crate::numerics::SummationMethod::Exact,
        });
    }
    Ok(phi_terms_sum(x, q, ctx, true))
}

/// The first `count` zeros 0 < ξ_1 < ξ_2 < ... of Φ.
#[derive(Debug, Clone)]
pub struct PhiZeroTable {
    pub q: QParameter,
    pub zeros: Vec<Float>,
    pub bits: u32,
}

impl PhiZeroTable {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// Indices n where the separation ξ_{n+1}/ξ_n > q^{-2} fails (should be empty).
    pub fn separation_violations(&self) -> Vec<usize> {
        let bound = Float::with_val(self.bits, self.q.value().square_ref()).recip();
        self.zeros
            .windows(2)
            .enumerate()
            .filter(|(_, w)| Float::with_val(self.bits, &w[1] / &w[0]) <= bound)
            .map(|(i, _)| i)
            .collect()
    }
}

fn phi_value(x: &Float, q: &QParameter, ctx: &PrecisionContext) -> Result<Float> {
    let r = ramanujan_phi(x, q, ctx);
    if !r.converged {
        return Err(Error::Inconclusive(format!(
            "Phi series did not converge at x = {}",
            x.to_string_radix(10, Some(10))
        )));
    }
    Ok(r.value)
}

/// Locate the first `count` zeros of Φ by scanning the geometric grid
/// x_j = x_0 q^{-j/4} (at least 8 samples between consecutive zeros, given
/// their q^{-2} separation) and refining each sign change.
pub fn phi_zeros(q: &QParameter, count: usize, ctx: &PrecisionContext) -> Result<PhiZeroTable> {
    let p = ctx.bits;
    let step_up = Float::with_val(p, q.at(ctx).pow(-0.25f64));
    // Walk down from 1 until Φ is certainly positive: Σ_{k>=1}|term_k| < 1.
    let mut x = ctx.one();
    let mut guard = 0;
    loop {
        let work = ctx.with_bits(p + phi_guard_bits(&x, q));
        let qv = q.at(&work);
        let mut term = work.one();
        let mut qk = work.one();
        let abs_sum = sum_series(
            |k| {
                if k == 0 {
                    return Some(Float::new(work.bits));
                }
                let q2km1 = Float::with_val(work.bits, &qk * &qk) * &qv;
                qk *= &qv;
                term *= q2km1;
                term *= &x;
                term /= Float::with_val(work.bits, 1 - &qk);
                Some(term.clone())
            },
            &work,
        );
        if abs_sum.value < 1 {
            break;
        }
        x /= &step_up;
        guard += 1;
        if guard > ctx.max_terms {
            return Err(Error::Inconclusive("no positive region of Phi found below 1".into()));
        }
    }
    let mut zeros = Vec::with_capacity(count);
    let mut prev_x = x.clone();
    let mut prev_v = phi_value(&prev_x, q, ctx)?;
    let mut steps = 0usize;
    while zeros.len() < count {
        steps += 1;
        if steps > ctx.max_terms {
            return Err(Error::Inconclusive(format!(
                "grid scan found only {} of {count} zeros of Phi up to x = {}",
                zeros.len(),
                prev_x.to_string_radix(10, Some(10))
            )));
        }
        let next_x = Float::with_val(p, &prev_x * &step_up);
        let next_v = phi_value(&next_x, q, ctx)?;
        if next_v.is_zero() {
            zeros.push(next_x.clone());
        } else if !prev_v.is_zero() && prev_v.is_sign_negative() != next_v.is_sign_negative() {
            let root = bracketed_root(|t| phi_value(t, q, ctx), &prev_x, &next_x, ctx)?;
            zeros.push(root);
        }
        prev_x = next_x;
        prev_v = next_v;
    }
    let table = PhiZeroTable {
        q: q.clone(),
        zeros,
        bits: p,
    };
    let bad = table.separation_violations();
    if !bad.is_empty() {
        return Err(Error::Inconclusive(format!(
            "zero separation xi_(n+1)/xi_n > q^-2 fails at n = {bad:?}"
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn euler_function_at_half() {
        let c = ctx();
        let q = QParameter::from_f64(0.5, &c).unwrap();
        let v = qpochhammer_real(&q.at(&c), &q, PochhammerLength::Infinite, &c);
        let expected = c.parse("0.288788095086602421278899721929230780088911904840").unwrap();
        assert!(Float::with_val(c.bits, &v - &expected).abs() < 1e-45);
        let z = qpochhammer(&Complex::real(&q.at(&c)), &q, PochhammerLength::Infinite, &c);
        assert!(Float::with_val(c.bits, &z.re - &expected).abs() < 1e-45);
        assert!(z.im.is_zero());
    }

    #[test]
    fn finite_pochhammer() {
        let c = ctx();
        let q = QParameter::from_f64(0.5, &c).unwrap();
        // (0.5; 0.5)_2 = 0.5 · 0.75
        let v = qpochhammer_real(&q.at(&c), &q, PochhammerLength::Finite(2), &c);
        assert_eq!(v, 0.375);
        let empty = qpochhammer_real(&c.float(7), &q, PochhammerLength::Finite(0), &c);
        assert_eq!(empty, 1);
    }

    #[test]
    fn q_out_of_range() {
        let c = ctx();
        assert!(QParameter::from_f64(1.0, &c).is_err());
        assert!(QParameter::from_f64(0.0, &c).is_err());
        assert!(QParameter::from_f64(-0.5, &c).is_err());
    }

    #[test]
    fn gauss_binomial_values() {
        let c = ctx();
        let q = QParameter::from_f64(0.5, &c).unwrap();
        assert_eq!(gauss_binomial(4, 2, &q, &c).unwrap(), 2.1875);
        assert_eq!(gauss_binomial(7, 0, &q, &c).unwrap(), 1);
        assert!(gauss_binomial(3, 4, &q, &c).is_err());
        assert!(gauss_binomial(3, -1, &q, &c).is_err());
    }

    #[test]
    fn phi_at_zero_is_one() {
        let c = ctx();
        let q = QParameter::from_f64(0.5, &c).unwrap();
        let r = ramanujan_phi(&c.zero(), &q, &c);
        assert_eq!(r.value, 1);
    }

    #[test]
    fn phi_derivative_matches_finite_difference() {
        let c = ctx();
        let q = QParameter::from_f64(0.5, &c).unwrap();
        let x = c.float(2.5);
        let h = c.float(1e-20);
        let up = ramanujan_phi(&Float::with_val(c.bits, &x + &h), &q, &c).value;
        let dn = ramanujan_phi(&Float::with_val(c.bits, &x - &h), &q, &c).value;
        let fd = (up - dn) / (h * 2u32);
        let d = ramanujan_phi_derivative(&x, &q, &c).unwrap().value;
        assert!(Float::with_val(c.bits, &fd - &d).abs() < 1e-30);
    }

    #[test]
    fn first_zeros_at_half() {
        let c = ctx();
        let q = QParameter::from_f64(0.5, &c).unwrap();
        let t = phi_zeros(&q, 6, &c).unwrap();
        let expected = [
            1.24821916391191,
            6.51204094741915,
            29.0298303778307,
            122.062195204049,
            500.125586099324,
            2024.25175353049,
        ];
        for (z, e) in t.zeros.iter().zip(expected) {
            assert!(close(z, e, 1e-9 * e), "{z} vs {e}");
        }
        assert!(t.separation_violations().is_empty());
    }
}
