use rug::ops::Pow;
use rug::Float;

use super::{nevanlinna_eval, Parameter};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::moments::{eval_pq_real, RecurrenceCoefficients};
use crate::numerics::{bracketed_root, pow2, sum_terms, Complex, PrecisionContext, Scalar, SummationMethod};

/// Sampling pattern for the sign-change scan.
#[derive(Debug, Clone)]
pub enum ScanGrid {
    /// Points ±floor·ratio^j on each side of 0, plus 0 itself when inside the window.
    Geometric { ratio: f64, floor: f64 },
    /// Evenly spaced points.
    Arithmetic { step: f64 },
    /// Points ±(j·step)^power: evenly spaced in |x|^{1/power}.
    Power { power: u32, step: f64 },
}

#[derive(Debug, Clone)]
pub struct ScanWindow {
    pub lo: Float,
    pub hi: Float,
    pub grid: ScanGrid,
}

impl ScanWindow {
    pub fn geometric(lo: f64, hi: f64, ratio: f64, floor: f64, prec: u32) -> Self {
        ScanWindow {
            lo: Float::with_val(prec, lo),
            hi: Float::with_val(prec, hi),
            grid: ScanGrid::Geometric { ratio, floor },
        }
    }

    pub fn arithmetic(lo: f64, hi: f64, step: f64, prec: u32) -> Self {
        ScanWindow {
            lo: Float::with_val(prec, lo),
            hi: Float::with_val(prec, hi),
            grid: ScanGrid::Arithmetic { step },
        }
    }

    pub fn power(lo: f64, hi: f64, power: u32, step: f64, prec: u32) -> Self {
        ScanWindow {
            lo: Float::with_val(prec, lo),
            hi: Float::with_val(prec, hi),
            grid: ScanGrid::Power { power, step },
        }
    }

    /// Sorted sample points inside [lo, hi], both ends included.
    pub fn points(&self) -> Vec<Float> {
        let p = self.lo.prec();
        let mut pts = vec![self.lo.clone()];
        match &self.grid {
            ScanGrid::Arithmetic { step } => {
                let mut x = Float::with_val(p, &self.lo + *step);
                while x < self.hi {
                    pts.push(x.clone());
                    x += *step;
                }
            }
            ScanGrid::Power { power, step } => {
                let mut neg = Vec::new();
                let mut j = 1u32;
                loop {
                    let x = -Float::with_val(p, Float::with_val(p, *step * j as f64).pow(*power));
                    if x <= self.lo {
                        break;
                    }
                    neg.push(x);
                    j += 1;
                }
                neg.reverse();
                pts.extend(neg);
                if self.lo < 0 && self.hi > 0 {
                    pts.push(Float::new(p));
                }
                let mut j = 1u32;
                loop {
                    let x = Float::with_val(p, *step * j as f64).pow(*power);
                    if x >= self.hi {
                        break;
                    }
                    if x > self.lo {
                        pts.push(x);
                    }
                    j += 1;
                }
            }
            ScanGrid::Geometric { ratio, floor } => {
                let floor = Float::with_val(p, *floor);
                let mut neg = Vec::new();
                let mut x = floor.clone();
                while Float::with_val(p, -&x) > self.lo {
                    neg.push(Float::with_val(p, -&x));
                    x *= *ratio;
                }
                neg.reverse();
                pts.extend(neg);
                if self.lo < 0 && self.hi > 0 {
                    pts.push(Float::new(p));
                }
                let mut x = if self.lo > floor { Float::with_val(p, &self.lo * *ratio) } else { floor };
                while x < self.hi {
                    if x > self.lo {
                        pts.push(x.clone());
                    }
                    x *= *ratio;
                }
            }
        }
        pts.push(self.hi.clone());
        pts.dedup();
        pts
    }
}

/// Zeros found by a scan, plus the brackets that could not be resolved.
#[derive(Debug, Clone)]
pub struct SupportScan {
    pub atoms: Vec<Float>,
    pub inconclusive: Vec<(Float, Float, String)>,
    pub evaluations: usize,
}

fn denominator_at(rc: &RecurrenceCoefficients, t: &Parameter, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let q = nevanlinna_eval(rc, x, ctx)?;
    Ok(q.denominator(t))
}

/// Zeros of B + tD (of D for t = ∞) inside the window: the support of the
/// N-extremal solution μ_t. Sign changes between grid points are refined by
/// bracketed root finding; exact zeros on the grid (such as x = 0 for
/// t = ∞) are taken as they are.
pub fn nextremal_support(
    rc: &RecurrenceCoefficients,
    t: &Parameter,
    window: &ScanWindow,
    ctx: &PrecisionContext,
) -> Result<SupportScan> {
    let pts = window.points();
    let mut scan = SupportScan {
        atoms: Vec::new(),
        inconclusive: Vec::new(),
        evaluations: 0,
    };
    let mut prev: Option<(Float, Float)> = None;
    for x in pts {
        scan.evaluations += 1;
        let v = match denominator_at(rc, t, &x, ctx) {
            Ok(v) => v,
            Err(e) if e.is_inconclusive() => {
                let lo = prev.as_ref().map_or_else(|| x.clone(), |(px, _)| px.clone());
                scan.inconclusive.push((lo, x.clone(), e.to_string()));
                prev = None;
                continue;
            }
            Err(e) => return Err(e),
        };
        if v.is_zero() {
            scan.atoms.push(x.clone());
            prev = None;
            continue;
        }
        if let Some((px, pv)) = &prev {
            if pv.is_sign_negative() != v.is_sign_negative() {
                match bracketed_root(|y| denominator_at(rc, t, y, ctx), px, &x, ctx) {
                    Ok(root) => scan.atoms.push(root),
                    Err(e) => scan.inconclusive.push((px.clone(), x.clone(), e.to_string())),
                }
            }
        }
        prev = Some((x, v));
    }
    Ok(scan)
}

/// ρ(x0) = 1 / Σ p_n(x0)² with its relative truncation estimate.
#[derive(Debug, Clone)]
pub struct MassEstimate {
    pub mass: Float,
    pub relative_tail: Float,
    pub method: SummationMethod,
}

/// Mass an N-extremal solution places at its support point x0.
pub fn mass_at(rc: &RecurrenceCoefficients, x0: &Float, ctx: &PrecisionContext) -> Result<MassEstimate> {
    let pp = eval_pq_real(rc, x0, rc.len())?;
    let terms: Vec<Float> = pp.p.iter().map(|v| Float::with_val(ctx.bits, v.square_ref())).collect();
    let s = sum_terms(&terms, ctx);
    match s.method {
        SummationMethod::Divergent => Err(Error::Divergent(format!(
            "Σ p_n(x0)² does not converge at x0 = {}",
            x0.to_string_radix(10, Some(12))
        ))),
        _ if !s.converged => Err(Error::Inconclusive(format!(
            "Σ p_n(x0)² at x0 = {} not resolved by {} terms (tail {})",
            x0.to_string_radix(10, Some(12)),
            terms.len(),
            s.tail_bound.to_string_radix(10, Some(4))
        ))),
        _ => Ok(MassEstimate {
            mass: Float::with_val(ctx.bits, s.value.recip_ref()),
            relative_tail: Float::with_val(ctx.bits, &s.tail_bound / &s.value),
            method: s.method,
        }),
    }
}

/// The t with x0 in the support of μ_t: -B(x0)/D(x0), or ∞ where D vanishes.
pub fn parameter_of_point(rc: &RecurrenceCoefficients, x0: &Float, ctx: &PrecisionContext) -> Result<Parameter> {
    let q = nevanlinna_eval(rc, x0, ctx)?;
    let p = ctx.bits;
    let scale = Float::with_val(p, q.b.abs_ref()) + Float::with_val(p, q.d.abs_ref());
    let tol = Float::with_val(p, &q.tail_bound * 4u32) + scale * pow2(p, -(p as i32) / 2);
    let d = Float::with_val(p, q.d.abs_ref());
    if d <= tol {
        if Float::with_val(p, q.b.abs_ref()) <= tol {
            return Err(Error::Inconclusive("B and D both vanish to tolerance".into()));
        }
        return Ok(Parameter::Infinite);
    }
    Ok(Parameter::Finite(Float::with_val(p, -Float::with_val(p, &q.b / &q.d))))
}

/// |Σ m_i/(x_i - z) + (A + tC)/(B + tD)| at a non-real z: how well the
/// truncated measure reproduces the Stieltjes transform of μ_t.
pub fn stieltjes_transform_check(
    rc: &RecurrenceCoefficients,
    t: &Parameter,
    z: &Complex,
    measure: &DiscreteMeasure,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if z.im.is_zero() {
        return Err(Error::Domain("z must be non-real".into()));
    }
    let q = nevanlinna_eval(rc, z, ctx)?;
    let f = q.numerator(t).div(&q.denominator(t));
    let mut s = Complex::zero(ctx.bits);
    for (x, m) in measure.atoms.iter().zip(&measure.masses) {
        let den = Complex::real(x).sub_ref(z);
        s = s.add_ref(&den.recip().mul_real(m));
    }
    Ok(s.add_ref(&f).abs())
}

/// μ_t restricted to the window: support by scanning, masses by [`mass_at`].
pub fn nextremal_measure(
    rc: &RecurrenceCoefficients,
    t: &Parameter,
    window: &ScanWindow,
    max_tail_degree: usize,
    ctx: &PrecisionContext,
) -> Result<(DiscreteMeasure, SupportScan)> {
    let scan = nextremal_support(rc, t, window, ctx)?;
    if !scan.inconclusive.is_empty() {
        return Err(Error::Inconclusive(format!(
            "{} scan brackets unresolved, first: {}",
            scan.inconclusive.len(),
            scan.inconclusive[0].2
        )));
    }
    let masses = scan
        .atoms
        .iter()
        .map(|x| mass_at(rc, x, ctx).map(|m| m.mass))
        .collect::<Result<Vec<_>>>()?;
    let m = DiscreteMeasure::with_estimated_tails(scan.atoms.clone(), masses, format!("mu_t, t = {t}"), max_tail_degree)?;
    Ok((m, scan))
}

/// Strict interlacing over the common range: between two consecutive points
/// of one set lies exactly one point of the other.
pub fn interlaces(a: &[Float], b: &[Float]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let lo = if a[0] > b[0] { &a[0] } else { &b[0] };
    let hi = if a[a.len() - 1] < b[b.len() - 1] { &a[a.len() - 1] } else { &b[b.len() - 1] };
    let mut merged: Vec<(&Float, bool)> = a
        .iter()
        .map(|x| (x, true))
        .chain(b.iter().map(|x| (x, false)))
        .filter(|(x, _)| *x >= lo && *x <= hi)
        .collect();
    merged.sort_by(|x, y| x.0.partial_cmp(y.0).expect("finite atoms"));
    merged.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 != w[1].0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(v: &[f64]) -> Vec<Float> {
        v.iter().map(|x| Float::with_val(64, *x)).collect()
    }

    #[test]
    fn interlacing() {
        assert!(interlaces(&fl(&[1.0, 3.0, 5.0]), &fl(&[2.0, 4.0, 6.0])));
        assert!(interlaces(&fl(&[0.0, 2.0, 4.0]), &fl(&[1.0, 3.0])));
        assert!(!interlaces(&fl(&[1.0, 2.0, 5.0]), &fl(&[3.0, 4.0, 6.0])));
    }

    #[test]
    fn geometric_grid_includes_zero_and_ends() {
        let w = ScanWindow::geometric(-1.0, 100.0, 2.0, 0.25, 64);
        let p = w.points();
        assert_eq!(p[0], -1);
        assert!(p.iter().any(|x| x.is_zero()));
        assert_eq!(*p.last().unwrap(), 100);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}
