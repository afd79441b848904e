use rug::Float;
use serde::{Deserialize, Serialize};

use super::Parameter;
use crate::error::{Error, Result};
use crate::moments::{eval_pq_real, RecurrenceCoefficients};
use crate::numerics::{extrapolate_limit, PrecisionContext};

/// Ratio threshold for the geometric-decay rule.
pub const RATIO_THRESHOLD: f64 = 0.95;
/// Number of trailing terms the classifier fits.
pub const WINDOW: usize = 16;
/// Decay exponents at or above this count as summable (t_n ~ n^-β).
const SUMMABLE_EXPONENT: f64 = 1.5;
/// Decay exponents at or below this count as non-summable.
const DIVERGENT_EXPONENT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Determinacy {
    Determinate,
    Indeterminate,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StieltjesClass {
    #[serde(rename = "det(S)")]
    DetS,
    #[serde(rename = "indet(S)")]
    IndetS,
    #[serde(rename = "not-stieltjes")]
    NotStieltjes,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl std::fmt::Display for StieltjesClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StieltjesClass::DetS => "det(S)",
            StieltjesClass::IndetS => "indet(S)",
            StieltjesClass::NotStieltjes => "not-stieltjes",
            StieltjesClass::NotApplicable => "n/a",
        })
    }
}

/// What the classifier looked at.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifierEvidence {
    /// Number of terms t_n = p_n(0)² + q_n(0)² examined (n = 0..N).
    pub terms: usize,
    pub window: usize,
    /// Fitted per-step ratio of t_n over the window, and over its two halves.
    pub ratio: f64,
    pub half_ratios: (f64, f64),
    /// Fitted algebraic exponent β in t_n ~ n^-β, over the window and halves.
    pub exponent: f64,
    pub half_exponents: (f64, f64),
    /// log10 of the partial sums Σ_{k<=n} t_k over the window.
    pub log10_partial_sums: Vec<f64>,
    /// Which rule decided: "geometric", "algebraic" or "none".
    pub rule: String,
    /// Distance from the decision boundary in units of the boundary:
    /// |ln r - ln θ| / |ln θ| for the geometric rule, |β - 1| for the algebraic one.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeterminacyVerdict {
    pub verdict: Determinacy,
    pub evidence: ClassifierEvidence,
    pub stieltjes_class: StieltjesClass,
}

/// α = lim p_n(0)/q_n(0) and the Friedrichs parameter F = -1/α.
#[derive(Debug, Clone)]
pub struct StieltjesClassification {
    pub alpha: Float,
    /// `Parameter::Infinite` when α = 0 (det(S)).
    pub friedrichs: Parameter,
    pub converged: bool,
    /// max |r_n - r_N| over the stability window, or the extrapolation
    /// error estimate when `extrapolated`.
    pub spread: Float,
    /// α came from extrapolating r_n = p_n(0)/q_n(0) in 1/n.
    pub extrapolated: bool,
}

fn ln_f64(x: &Float) -> f64 {
    Float::with_val(64, x.ln_ref()).to_f64()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

fn sign_test_stieltjes(p0: &[Float]) -> bool {
    p0.iter()
        .enumerate()
        .all(|(n, v)| !v.is_zero() && v.is_sign_negative() == (n % 2 == 1))
}

/// Decide determinacy from the growth of t_n = p_n(0)² + q_n(0)².
///
/// Indeterminate when t_n decays geometrically (fitted ratio below the
/// threshold on the whole window and both halves) or algebraically with a
/// summable exponent; determinate when t_n does not decay (ratio >= 1) or
/// decays no faster than 1/n. Anything else is inconclusive.
pub fn classify(rc: &RecurrenceCoefficients, ctx: &PrecisionContext) -> Result<DeterminacyVerdict> {
    let n = rc.len();
    if n < 2 * WINDOW {
        return Err(Error::Length(format!(
            "classification needs at least {} recurrence coefficients, got {n}",
            2 * WINDOW
        )));
    }
    let at0 = eval_pq_real(rc, &ctx.zero(), n)?;
    let t: Vec<Float> = at0
        .p
        .iter()
        .zip(&at0.q)
        .map(|(p, q)| Float::with_val(ctx.bits, p.square_ref()) + Float::with_val(ctx.bits, q.square_ref()))
        .collect();
    let start = n + 1 - WINDOW;
    let lin: Vec<(f64, f64)> = (start..=n).map(|k| (k as f64, ln_f64(&t[k]))).collect();
    let log: Vec<(f64, f64)> = (start..=n).map(|k| ((k as f64).ln(), ln_f64(&t[k]))).collect();
    let h = WINDOW / 2;
    let ratio = slope(&lin).exp();
    let half_ratios = (slope(&lin[..h]).exp(), slope(&lin[h..]).exp());
    let exponent = -slope(&log);
    let half_exponents = (-slope(&log[..h]), -slope(&log[h..]));

    let mut partial = ctx.zero();
    let mut log10_partial_sums = Vec::with_capacity(WINDOW);
    for (k, tk) in t.iter().enumerate() {
        partial += tk;
        if k >= start {
            log10_partial_sums.push(Float::with_val(64, partial.log10_ref()).to_f64());
        }
    }

    let theta = RATIO_THRESHOLD;
    let geo_margin = (ratio.ln() - theta.ln()).abs() / theta.ln().abs();
    let all_below = ratio < theta && half_ratios.0 < theta && half_ratios.1 < theta;
    let all_growing = ratio >= 1.0 && half_ratios.0 >= 1.0 && half_ratios.1 >= 1.0;
    let summable = exponent >= SUMMABLE_EXPONENT
        && half_exponents.0 >= SUMMABLE_EXPONENT
        && half_exponents.1 >= SUMMABLE_EXPONENT;
    let non_summable = exponent <= DIVERGENT_EXPONENT
        && half_exponents.0 <= DIVERGENT_EXPONENT
        && half_exponents.1 <= DIVERGENT_EXPONENT;
    let (verdict, rule, margin) = if all_below {
        (Determinacy::Indeterminate, "geometric", geo_margin)
    } else if all_growing {
        (Determinacy::Determinate, "geometric", geo_margin)
    } else if summable {
        (Determinacy::Indeterminate, "algebraic", exponent - DIVERGENT_EXPONENT)
    } else if non_summable {
        (Determinacy::Determinate, "algebraic", DIVERGENT_EXPONENT - exponent)
    } else {
        (Determinacy::Inconclusive, "none", 0.0)
    };

    let stieltjes = sign_test_stieltjes(&at0.p);
    let stieltjes_class = match (verdict, stieltjes) {
        (Determinacy::Inconclusive, _) => StieltjesClass::NotApplicable,
        (_, false) => StieltjesClass::NotStieltjes,
        (Determinacy::Determinate, true) => StieltjesClass::DetS,
        (Determinacy::Indeterminate, true) => {
            let f = friedrichs_parameter(rc, ctx)?;
            match f.friedrichs {
                Parameter::Infinite => StieltjesClass::DetS,
                Parameter::Finite(_) if f.alpha.is_sign_negative() => StieltjesClass::IndetS,
                Parameter::Finite(_) => StieltjesClass::NotStieltjes,
            }
        }
    };

    Ok(DeterminacyVerdict {
        verdict,
        evidence: ClassifierEvidence {
            terms: n + 1,
            window: WINDOW,
            ratio,
            half_ratios,
            exponent,
            half_exponents,
            log10_partial_sums,
            rule: rule.into(),
            margin,
        },
        stieltjes_class,
    })
}

/// α = lim p_n(0)/q_n(0) read off the last stored ratio, accepted as
/// converged when the ratios over the trailing window agree to `tail_tol`.
/// When they do not, the ratio sequence is extrapolated in 1/n and the
/// result used if its error estimate beats the window spread.
/// F = -1/α, or ∞ when α vanishes to within the window spread.
pub fn friedrichs_parameter(rc: &RecurrenceCoefficients, ctx: &PrecisionContext) -> Result<StieltjesClassification> {
    let n = rc.len();
    if n < WINDOW + 1 {
        return Err(Error::Length(format!("need more than {WINDOW} coefficients, got {n}")));
    }
    let at0 = eval_pq_real(rc, &ctx.zero(), n)?;
    let ratios: Vec<Float> = (n + 1 - WINDOW..=n)
        .filter(|&k| !at0.q[k].is_zero())
        .map(|k| Float::with_val(ctx.bits, &at0.p[k] / &at0.q[k]))
        .collect();
    let alpha = ratios
        .last()
        .cloned()
        .ok_or_else(|| Error::Domain("q_n(0) vanishes across the window".into()))?;
    let mut spread = ctx.zero();
    for r in &ratios {
        let d = Float::with_val(ctx.bits, r - &alpha).abs();
        if d > spread {
            spread = d;
        }
    }
    let mut alpha = alpha;
    let mut extrapolated = false;
    let settled = spread <= Float::with_val(ctx.bits, alpha.abs_ref()) * ctx.tol() || spread.is_zero();
    if !settled {
        // Algebraic approach (α_n - α ~ c/n): extrapolate the whole sequence.
        let seq: Vec<Float> = (1..=n)
            .filter(|&k| !at0.q[k].is_zero())
            .map(|k| Float::with_val(ctx.bits, &at0.p[k] / &at0.q[k]))
            .collect();
        if let Some((limit, err)) = extrapolate_limit(&seq, ctx.bits) {
            if err < spread {
                alpha = limit;
                spread = err;
                extrapolated = true;
            }
        }
    }
    let abs_alpha = Float::with_val(ctx.bits, alpha.abs_ref());
    let scale = abs_alpha.clone().max(&ctx.unit_roundoff());
    let zero_alpha = abs_alpha <= Float::with_val(ctx.bits, &spread * 10u32)
        || abs_alpha <= Float::with_val(ctx.bits, ctx.unit_roundoff() * 256u32);
    let converged = spread <= Float::with_val(ctx.bits, &scale * &ctx.tol())
        || spread.is_zero()
        || (zero_alpha && spread <= ctx.tol());
    let friedrichs = if zero_alpha {
        Parameter::Infinite
    } else {
        Parameter::Finite(-Float::with_val(ctx.bits, alpha.recip_ref()))
    };
    Ok(StieltjesClassification {
        alpha,
        friedrichs,
        converged,
        spread,
        extrapolated,
    })
}
