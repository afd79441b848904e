//! Explicit indeterminate families: the quartic (Valent-type) birth-death
//! family, the Al-Salam–Carlitz q-family and the Stieltjes–Wigert family.

use std::fmt;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::moments::{recurrence_from_moments, MomentSequence, MomentSource, RecurrenceCoefficients};
use crate::nevanlinna::{mass_at, Parameter, ScanWindow};
use crate::numerics::special::{gamma, pi};
use crate::numerics::{sum_series, PrecisionContext, SummationResult};
use crate::qcalc::{gauss_binomial, phi_zeros, qpochhammer_real, PochhammerLength, QParameter};

/// Degree up to which truncated family measures carry tail bounds.
fn tail_degree(count: usize) -> usize {
    4 * count + 16
}

// ---------------------------------------------------------------- quartic

/// K0 = Γ(1/4)² / (4√π) and the mass normalizer 4π / K0².
#[derive(Debug, Clone)]
pub struct QuarticConstants {
    pub k0: Float,
    pub normalizer: Float,
}

impl QuarticConstants {
    pub fn new(ctx: &PrecisionContext) -> Self {
        let p = ctx.bits;
        let g = gamma(&(ctx.one() / 4u32));
        let k0 = Float::with_val(p, g.square_ref()) / (pi(p).sqrt() * 4u32);
        let normalizer = pi(p) * 4u32 / Float::with_val(p, k0.square_ref());
        QuarticConstants { k0, normalizer }
    }
}

fn quartic_mass(j: u32, c: &QuarticConstants, ctx: &PrecisionContext) -> Float {
    // normalizer · jπ / sinh(jπ)
    let p = ctx.bits;
    let jpi = pi(p) * j;
    let sh = Float::with_val(p, jpi.sinh_ref());
    Float::with_val(p, &c.normalizer * &jpi) / sh
}

/// μ_F: masses (4π/K0²)(2k+1)π / sinh((2k+1)π) at (2k+1)^4, k = 0..count.
pub fn quartic_friedrichs(count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
    let c = QuarticConstants::new(ctx);
    let atoms = (0..count).map(|k| ctx.float((2 * k + 1) as u32).pow(4u32)).collect();
    let masses = (0..count).map(|k| quartic_mass((2 * k + 1) as u32, &c, ctx)).collect();
    DiscreteMeasure::with_estimated_tails(atoms, masses, "quartic mu_F", tail_degree(count))
}

/// μ_K: mass π/K0² at 0 and (4π/K0²) 2kπ / sinh(2kπ) at (2k)^4, k >= 1.
pub fn quartic_krein(count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
    let c = QuarticConstants::new(ctx);
    let mut atoms = vec![ctx.zero()];
    let mut masses = vec![pi(ctx.bits) / Float::with_val(ctx.bits, c.k0.square_ref())];
    for k in 1..count {
        atoms.push(ctx.float((2 * k) as u32).pow(4u32));
        masses.push(quartic_mass((2 * k) as u32, &c, ctx));
    }
    DiscreteMeasure::with_estimated_tails(atoms, masses, "quartic mu_K", tail_degree(count))
}

/// μ_c: the μ_F weights multiplied by (2k+1)^c (not normalized).
pub fn quartic_mu_c(c_exp: f64, count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
    if count == 0 {
        return Err(Error::Length("mu_c needs at least one atom".into()));
    }
    let c = QuarticConstants::new(ctx);
    let atoms = (0..count).map(|k| ctx.float((2 * k + 1) as u32).pow(4u32)).collect();
    let masses = (0..count)
        .map(|k| {
            let j = (2 * k + 1) as u32;
            quartic_mass(j, &c, ctx) * ctx.float(j).pow(ctx.float(c_exp))
        })
        .collect();
    let m = DiscreteMeasure::new(atoms, masses, format!("quartic mu_c, c = {c_exp}"))?;
    // Term j = 2k+1 of the degree-n moment is ∝ j^(1+c+4n)/sinh(jπ); past the
    // last atom J the ratio of consecutive terms is at most
    // ((J+2)/J)^max(0, 1+c+4n) e^(-2π) / (1 - e^(-2Jπ)).
    let p = ctx.bits;
    let last = (2 * count - 1) as f64;
    let mut bounds = std::collections::BTreeMap::new();
    for n in 0..=tail_degree(count) {
        let e = (1.0 + c_exp + 4.0 * n as f64).max(0.0);
        let r = ((last + 2.0) / last).powf(e) * (-2.0 * std::f64::consts::PI).exp()
            / (1.0 - (-2.0 * last * std::f64::consts::PI).exp());
        if r >= 0.5 {
            break;
        }
        let t_last = Float::with_val(p, &m.masses[count - 1] * Float::with_val(p, m.atoms[count - 1].clone().pow(n as u32)));
        // a little headroom for the f64 ratio
        bounds.insert(n, t_last * (r * 1.01 / (1.0 - r)));
    }
    let mass = bounds
        .get(&0)
        .cloned()
        .unwrap_or_else(|| Float::with_val(p, rug::float::Special::Infinity));
    Ok(m.with_tails(mass, bounds))
}

/// F = ∫ x^-1 dμ_F for the quartic family.
pub fn quartic_friedrichs_value(ctx: &PrecisionContext) -> SummationResult<Float> {
    let c = QuarticConstants::new(ctx);
    sum_series(
        |k| {
            let j = (2 * k + 1) as u32;
            Some(quartic_mass(j, &c, ctx) / ctx.float(j).pow(4u32))
        },
        ctx,
    )
}

// ---------------------------------------------------------- Al-Salam–Carlitz

fn asc_check(a: &Float, q: &QParameter, count: usize, ctx: &PrecisionContext) -> Result<()> {
    let inv_q = Float::with_val(ctx.bits, q.value().recip_ref());
    if !(*a > 1 && *a < inv_q) {
        return Err(Error::Domain(format!(
            "Al-Salam-Carlitz needs 1 < a < 1/q (a = {}, q = {})",
            a.to_string_radix(10, Some(10)),
            q.value().to_string_radix(10, Some(10))
        )));
    }
    let need = asc_bits(count, q);
    if ctx.bits < need {
        return Err(Error::Domain(format!(
            "{count} Al-Salam-Carlitz atoms need at least {need} bits (have {})",
            ctx.bits
        )));
    }
    Ok(())
}

/// Minimum working precision for `count` atoms: count·log2(1/q) + 64.
pub fn asc_bits(count: usize, q: &QParameter) -> u32 {
    (count as f64 * q.log2_inv()).ceil() as u32 + 64
}

/// Masses w_k = pref · r^k q^{k²} / ((u;q)_k (q;q)_k), built recursively.
fn asc_masses(pref: Float, r: &Float, u: &Float, q: &QParameter, count: usize, ctx: &PrecisionContext) -> Vec<Float> {
    let p = ctx.bits;
    let qv = q.at(ctx);
    let mut out = Vec::with_capacity(count);
    let mut w = pref;
    let mut qk = ctx.one(); // q^k
    let mut uqk = Float::with_val(p, u); // u q^k
    for k in 0..count {
        out.push(w.clone());
        // w_{k+1}/w_k = r q^{2k+1} / ((1 - u q^k)(1 - q^{k+1}))
        let q2k1 = Float::with_val(p, &qk * &qk) * &qv;
        let _ = k;
        qk *= &qv;
        w *= r;
        w *= q2k1;
        w /= Float::with_val(p, 1 - &uqk);
        w /= Float::with_val(p, 1 - &qk);
        uqk *= &qv;
    }
    out
}

/// μ_F = (q/a;q)_∞ Σ a^-k q^{k²} / ((q/a;q)_k (q;q)_k) δ_{a q^-k - 1}.
pub fn asc_friedrichs(a: &Float, q: &QParameter, count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
    asc_check(a, q, count, ctx)?;
    let p = ctx.bits;
    let u = Float::with_val(p, q.value() / a);
    let pref = qpochhammer_real(&u, q, PochhammerLength::Infinite, ctx);
    let r = Float::with_val(p, a.recip_ref());
    let masses = asc_masses(pref, &r, &u, q, count, ctx);
    let qv = q.at(ctx);
    let atoms = (0..count)
        .map(|k| Float::with_val(p, a / Float::with_val(p, (&qv).pow(k as u32))) - 1u32)
        .collect();
    DiscreteMeasure::with_estimated_tails(atoms, masses, "Al-Salam-Carlitz mu_F", tail_degree(count))
}

/// μ_K = (aq;q)_∞ Σ a^k q^{k²} / ((aq;q)_k (q;q)_k) δ_{q^-k - 1}.
pub fn asc_krein(a: &Float, q: &QParameter, count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
    asc_check(a, q, count, ctx)?;
    let p = ctx.bits;
    let u = Float::with_val(p, a * q.value());
    let pref = qpochhammer_real(&u, q, PochhammerLength::Infinite, ctx);
    let masses = asc_masses(pref, a, &u, q, count, ctx);
    let qv = q.at(ctx);
    let atoms = (0..count)
        .map(|k| Float::with_val(p, Float::with_val(p, (&qv).pow(k as u32)).recip_ref()) - 1u32)
        .collect();
    DiscreteMeasure::with_estimated_tails(atoms, masses, "Al-Salam-Carlitz mu_K", tail_degree(count))
}

/// F = (q;q)_∞ Σ q^k / ((a - q^k)(q;q)_k).
pub fn asc_friedrichs_value(a: &Float, q: &QParameter, ctx: &PrecisionContext) -> Result<SummationResult<Float>> {
    asc_check(a, q, 0, ctx)?;
    let p = ctx.bits;
    let qv = q.at(ctx);
    let euler = qpochhammer_real(&qv, q, PochhammerLength::Infinite, ctx);
    let mut qk = ctx.one();
    let mut fact = ctx.one();
    let r = sum_series(
        |k| {
            if k > 0 {
                qk *= &qv;
                fact *= Float::with_val(p, 1 - &qk);
            }
            let den = Float::with_val(p, a - &qk) * &fact;
            Some(Float::with_val(p, &qk / den))
        },
        ctx,
    );
    Ok(r.map(|v| v * euler))
}

// ---------------------------------------------------------- Stieltjes–Wigert

/// v_q(x) = q^{1/8} / √(2π log(1/q)) · x^{-1/2} exp(-log²x / (2 log(1/q))).
pub fn sw_density(x: &Float, q: &QParameter, ctx: &PrecisionContext) -> Result<Float> {
    if !(*x > 0) {
        return Err(Error::Domain("Stieltjes-Wigert density is defined for x > 0".into()));
    }
    let p = ctx.bits;
    let qv = q.at(ctx);
    let l = -Float::with_val(p, qv.ln_ref()); // log(1/q)
    let lx = Float::with_val(p, x.ln_ref());
    let expo = -Float::with_val(p, lx.square_ref()) / (Float::with_val(p, &l * 2u32));
    let norm = Float::with_val(p, qv.pow(0.125f64)) / Float::with_val(p, pi(p) * 2u32 * &l).sqrt();
    Ok(norm / Float::with_val(p, x.sqrt_ref()) * expo.exp())
}

/// s_n = q^{-n(n+1)/2}.
pub fn sw_moment(n: usize, q: &QParameter, ctx: &PrecisionContext) -> Float {
    let e = (n * (n + 1) / 2) as u32;
    Float::with_val(ctx.bits, q.at(ctx).pow(e)).recip()
}

pub fn sw_moments(count: usize, q: &QParameter, ctx: &PrecisionContext) -> MomentSequence {
    MomentSequence::new((0..count).map(|n| sw_moment(n, q, ctx)).collect(), MomentSource::ClosedForm)
}

/// Closed form p_n(x) = (-1)^n √(q^n/(q;q)_n) Σ_k [n,k]_q (-1)^k q^{k²} x^k.
pub fn sw_p(n: usize, x: &Float, q: &QParameter, ctx: &PrecisionContext) -> Result<Float> {
    // guard bits for the alternating sum
    let lx = Float::with_val(64, x.abs_ref()).log2().to_f64().max(0.0);
    let guard = (lx * lx / (4.0 * q.log2_inv())).ceil() as u32 + (n as u32) + 16;
    let work = ctx.with_bits(ctx.bits + guard);
    let p = work.bits;
    let qv = q.at(&work);
    let xv = Float::with_val(p, x);
    let mut s = work.zero();
    for k in 0..=n {
        let gb = gauss_binomial(n as i64, k as i64, q, &work)?;
        let mut t = gb * Float::with_val(p, (&qv).pow((k * k) as u32)) * Float::with_val(p, (&xv).pow(k as u32));
        if k % 2 == 1 {
            t = -t;
        }
        s += t;
    }
    let qfact = qpochhammer_real(&qv, q, PochhammerLength::Finite(n), &work);
    let pref = (Float::with_val(p, (&qv).pow(n as u32)) / qfact).sqrt();
    let mut v = s * pref;
    if n % 2 == 1 {
        v = -v;
    }
    Ok(Float::with_val(ctx.bits, v))
}

/// Jacobi coefficients of the Stieltjes–Wigert problem, recovered from the
/// closed-form moments.
pub fn sw_recurrence(q: &QParameter, len: usize, ctx: &PrecisionContext) -> Result<RecurrenceCoefficients> {
    let s = sw_moments(2 * len + 1, q, ctx);
    recurrence_from_moments(&s, len - 1, ctx)
}

/// Which Stieltjes–Wigert N-extremal solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwSolution {
    /// t = F = 1 - (q;q)_∞, support {ξ_k}.
    Friedrichs,
    /// t = 1, support {q ξ_k}.
    TOne,
    /// t = ∞, support {0} ∪ {ξ_k / q}.
    Krein,
}

/// Atoms of an SW N-extremal solution from the zeros ξ_k of Φ, masses
/// from ρ(x) = 1/Σ p_n(x)² using `rc`.
pub fn sw_nextremal_with(
    rc: &RecurrenceCoefficients,
    which: SwSolution,
    q: &QParameter,
    count: usize,
    ctx: &PrecisionContext,
) -> Result<DiscreteMeasure> {
    let p = ctx.bits;
    let qv = q.at(ctx);
    let zeros_needed = if which == SwSolution::Krein { count.saturating_sub(1) } else { count };
    let table = phi_zeros(q, zeros_needed.max(1), ctx)?;
    let zeros = &table.zeros[..zeros_needed];
    let (atoms, label): (Vec<Float>, &str) = match which {
        SwSolution::Friedrichs => (zeros.to_vec(), "Stieltjes-Wigert mu_F"),
        SwSolution::TOne => (zeros.iter().map(|z| Float::with_val(p, z * &qv)).collect(), "Stieltjes-Wigert mu_1"),
        SwSolution::Krein => {
            let mut v = vec![ctx.zero()];
            v.extend(zeros.iter().map(|z| Float::with_val(p, z / &qv)));
            (v, "Stieltjes-Wigert mu_K")
        }
    };
    let masses = atoms
        .iter()
        .map(|x| mass_at(rc, x, ctx).map(|m| m.mass))
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::with_estimated_tails(atoms, masses, label, tail_degree(count))
}

/// Recurrence length that resolves the SW masses of the first `count`
/// atoms to `tail_tol` (the weights p_n(x)² decay roughly like q^n past n ≈ k).
pub fn sw_recurrence_len(count: usize, q: &QParameter, ctx: &PrecisionContext) -> usize {
    let digits = -ctx.tail_tol.log2();
    count + 32 + (1.5 * digits / q.log2_inv()).ceil() as usize
}

pub fn sw_nextremal(which: SwSolution, q: &QParameter, count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
    let rc = sw_recurrence(q, sw_recurrence_len(count, q, ctx), ctx)?;
    sw_nextremal_with(&rc, which, q, count, ctx)
}

/// F = 1 - (q;q)_∞ for the Stieltjes–Wigert problem.
pub fn sw_friedrichs_value(q: &QParameter, ctx: &PrecisionContext) -> Float {
    let e = qpochhammer_real(&q.at(ctx), q, PochhammerLength::Infinite, ctx);
    ctx.one() - e
}

// ------------------------------------------------------------------ handle

/// A family together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyHandle {
    Quartic,
    AlSalamCarlitz { a: f64, q: f64 },
    StieltjesWigert { q: f64 },
}

impl fmt::Display for FamilyHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyHandle::Quartic => write!(f, "quartic"),
            FamilyHandle::AlSalamCarlitz { a, q } => write!(f, "al-salam-carlitz(a = {a}, q = {q})"),
            FamilyHandle::StieltjesWigert { q } => write!(f, "stieltjes-wigert(q = {q})"),
        }
    }
}

/// Solution selector for [`FamilyHandle::solution`].
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Friedrichs,
    Krein,
    T(Float),
    /// Quartic μ_c.
    C(f64),
}

impl Solution {
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        match s {
            "friedrichs" | "F" => Ok(Solution::Friedrichs),
            "krein" | "K" => Ok(Solution::Krein),
            _ => {
                if let Some(v) = s.strip_prefix("t=") {
                    Ok(Solution::T(crate::numerics::parse_float(v, prec)?))
                } else if let Some(v) = s.strip_prefix("c=") {
                    v.parse::<f64>()
                        .map(Solution::C)
                        .map_err(|e| Error::Usage(format!("bad c value {v:?}: {e}")))
                } else {
                    Err(Error::Usage(format!(
                        "unknown solution {s:?} (expected friedrichs, krein, t=<v> or c=<v>)"
                    )))
                }
            }
        }
    }
}

impl FamilyHandle {
    pub fn parse(name: &str, q: Option<f64>, a: Option<f64>) -> Result<Self> {
        let h = match name {
            "quartic" => FamilyHandle::Quartic,
            "al-salam-carlitz" | "asc" => FamilyHandle::AlSalamCarlitz {
                a: a.unwrap_or(1.5),
                q: q.unwrap_or(0.5),
            },
            "stieltjes-wigert" | "sw" => FamilyHandle::StieltjesWigert { q: q.unwrap_or(0.5) },
            other => {
                return Err(Error::Usage(format!(
                    "unknown family {other:?} (expected quartic, al-salam-carlitz or stieltjes-wigert)"
                )))
            }
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilyHandle::Quartic => Ok(()),
            FamilyHandle::StieltjesWigert { q } => {
                if q > 0.0 && q < 1.0 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("q = {q} is not in (0, 1)")))
                }
            }
            FamilyHandle::AlSalamCarlitz { a, q } => {
                if q > 0.0 && q < 1.0 && a > 1.0 && a < 1.0 / q {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("need 0 < q < 1 < a < 1/q, got a = {a}, q = {q}")))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyHandle::Quartic => "quartic",
            FamilyHandle::AlSalamCarlitz { .. } => "al-salam-carlitz",
            FamilyHandle::StieltjesWigert { .. } => "stieltjes-wigert",
        }
    }

    fn q_param(&self, ctx: &PrecisionContext) -> Result<QParameter> {
        match *self {
            FamilyHandle::AlSalamCarlitz { q, .. } | FamilyHandle::StieltjesWigert { q } => QParameter::from_f64(q, ctx),
            FamilyHandle::Quartic => Err(Error::Domain("the quartic family has no q".into())),
        }
    }

    /// Context adjusted to what the family needs. The quartic tails are
    /// algebraic, so its sums are only resolvable to about 1e-12. The
    /// Al-Salam–Carlitz products p_n(0)p_n(z) decay like (aq)^{n/2}, so a
    /// 1e-30 tail would need several hundred coefficients.
    pub fn working_context(&self, ctx: &PrecisionContext) -> PrecisionContext {
        match self {
            FamilyHandle::Quartic => ctx.with_tail_tol(ctx.tail_tol.max(1e-12)),
            FamilyHandle::AlSalamCarlitz { .. } => ctx.with_tail_tol(ctx.tail_tol.max(1e-20)),
            FamilyHandle::StieltjesWigert { .. } => ctx.clone(),
        }
    }

    /// Default recurrence length used for this family's analytic checks.
    pub fn default_recurrence_len(&self, ctx: &PrecisionContext) -> usize {
        match self {
            FamilyHandle::Quartic => 200,
            FamilyHandle::AlSalamCarlitz { .. } => 400,
            FamilyHandle::StieltjesWigert { q } => {
                let digits = -ctx.tail_tol.log2();
                (digits / -q.log2()).ceil() as usize + 48
            }
        }
    }

    /// Jacobi coefficients a_0..a_{len-1}, b_0..b_{len-1}.
    pub fn recurrence(&self, len: usize, ctx: &PrecisionContext) -> Result<RecurrenceCoefficients> {
        match *self {
            FamilyHandle::StieltjesWigert { .. } => sw_recurrence(&self.q_param(ctx)?, len, ctx),
            FamilyHandle::AlSalamCarlitz { a, .. } => {
                let q = self.q_param(ctx)?;
                let count = len + len / 2 + 40;
                let bits = (asc_bits(count, &q) + 64).max(ctx.bits).div_ceil(64) * 64;
                let work = ctx.with_bits(bits);
                let m = asc_friedrichs(&work.float(a), &q, count, &work)?;
                let s = crate::measures::moments(&m, 2 * len + 1)?;
                let rc = recurrence_from_moments(&s, len - 1, &work)?;
                Ok(round_rc(&rc, ctx.bits))
            }
            FamilyHandle::Quartic => {
                // Hankel cancellation grows to ~0.85 bits per index.
                let bits = (ctx.bits + (len as u32 * 9) / 10 + 64).max(1024).div_ceil(64) * 64;
                let work = ctx.with_bits(bits);
                let m = quartic_friedrichs(3 * len, &work)?;
                let s = crate::measures::moments(&m, 2 * len + 1)?;
                let rc = recurrence_from_moments(&s, len - 1, &work)?;
                Ok(round_rc(&rc, ctx.bits))
            }
        }
    }

    /// Moments s_0..s_{count-1} (closed form for SW, from μ_F otherwise).
    pub fn moments(&self, count: usize, ctx: &PrecisionContext) -> Result<MomentSequence> {
        match self {
            FamilyHandle::StieltjesWigert { .. } => Ok(sw_moments(count, &self.q_param(ctx)?, ctx)),
            _ => {
                let m = self.solution(&Solution::Friedrichs, count.max(40) + 40, ctx)?;
                let mut s = crate::measures::moments(&m, count)?;
                s.source = MomentSource::FromMeasure;
                Ok(s)
            }
        }
    }

    /// The Friedrichs parameter F.
    pub fn friedrichs_value(&self, ctx: &PrecisionContext) -> Result<Float> {
        match *self {
            FamilyHandle::StieltjesWigert { .. } => Ok(sw_friedrichs_value(&self.q_param(ctx)?, ctx)),
            FamilyHandle::AlSalamCarlitz { a, .. } => {
                let r = asc_friedrichs_value(&ctx.float(a), &self.q_param(ctx)?, ctx)?;
                converged(r, "Al-Salam-Carlitz F series")
            }
            FamilyHandle::Quartic => converged(quartic_friedrichs_value(ctx), "quartic F series"),
        }
    }

    /// Truncated N-extremal solution with `count` atoms.
    pub fn solution(&self, which: &Solution, count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
        match (self, which) {
            (FamilyHandle::Quartic, Solution::Friedrichs) => quartic_friedrichs(count, ctx),
            (FamilyHandle::Quartic, Solution::Krein) => quartic_krein(count, ctx),
            (FamilyHandle::Quartic, Solution::C(c)) => quartic_mu_c(*c, count, ctx),
            (FamilyHandle::AlSalamCarlitz { a, .. }, Solution::Friedrichs) => {
                let q = self.q_param(ctx)?;
                asc_friedrichs(&ctx.float(*a), &q, count, &self.asc_ctx(count, ctx)?)
            }
            (FamilyHandle::AlSalamCarlitz { a, .. }, Solution::Krein) => {
                let q = self.q_param(ctx)?;
                asc_krein(&ctx.float(*a), &q, count, &self.asc_ctx(count, ctx)?)
            }
            (FamilyHandle::StieltjesWigert { .. }, Solution::Friedrichs) => {
                sw_nextremal(SwSolution::Friedrichs, &self.q_param(ctx)?, count, ctx)
            }
            (FamilyHandle::StieltjesWigert { .. }, Solution::Krein) => {
                sw_nextremal(SwSolution::Krein, &self.q_param(ctx)?, count, ctx)
            }
            (FamilyHandle::StieltjesWigert { .. }, Solution::T(t)) if *t == 1 => {
                sw_nextremal(SwSolution::TOne, &self.q_param(ctx)?, count, ctx)
            }
            (_, Solution::T(t)) => self.general_solution(&Parameter::Finite(t.clone()), count, ctx),
            (_, Solution::C(_)) => Err(Error::Usage("c=<v> solutions exist only for the quartic family".into())),
        }
    }

    fn asc_ctx(&self, count: usize, ctx: &PrecisionContext) -> Result<PrecisionContext> {
        let need = asc_bits(count, &self.q_param(ctx)?);
        Ok(if ctx.bits >= need { ctx.clone() } else { ctx.with_bits(need.div_ceil(64) * 64) })
    }

    /// Scan window covering roughly the first `count` support points of any μ_t.
    pub fn scan_window(&self, count: usize, ctx: &PrecisionContext) -> ScanWindow {
        let p = ctx.bits;
        match *self {
            FamilyHandle::StieltjesWigert { q } => {
                let hi = q.powf(-2.0 * (count as f64 + 1.0)) * 2.0;
                ScanWindow::geometric(-0.5, hi, q.powf(-0.25), q * q * 0.1, p)
            }
            FamilyHandle::AlSalamCarlitz { a, q } => {
                let hi = a * q.powf(-(count as f64)) * 1.01;
                ScanWindow::geometric(-0.5, hi, q.powf(-0.25), (1.0 / q - 1.0) * 0.05, p)
            }
            FamilyHandle::Quartic => {
                let hi = (2.0 * count as f64 + 1.5).powi(4);
                ScanWindow::power(-0.5, hi, 4, 0.25, p)
            }
        }
    }

    /// μ_t for a general t by scanning for the zeros of B + tD. Only atoms
    /// below the first unresolved scan bracket are kept, so the result may
    /// hold fewer than `count` atoms.
    pub fn general_solution(&self, t: &Parameter, count: usize, ctx: &PrecisionContext) -> Result<DiscreteMeasure> {
        let work = self.working_context(ctx);
        let rc = self.recurrence(self.default_recurrence_len(&work), &work)?;
        let window = self.scan_window(count, &work);
        let scan = crate::nevanlinna::nextremal_support(&rc, t, &window, &work)?;
        let limit = scan.inconclusive.first().map(|(lo, _, _)| lo.clone());
        let atoms: Vec<Float> = scan
            .atoms
            .into_iter()
            .filter(|x| limit.as_ref().is_none_or(|l| x < l))
            .take(count)
            .collect();
        if atoms.is_empty() {
            return Err(Error::Inconclusive(format!("no support point of mu_t (t = {t}) could be resolved")));
        }
        let masses = atoms
            .iter()
            .map(|x| mass_at(&rc, x, &work).map(|m| m.mass))
            .collect::<Result<Vec<_>>>()?;
        DiscreteMeasure::with_estimated_tails(atoms, masses, format!("{} mu_t, t = {t}", self.name()), tail_degree(count))
    }
}

fn converged(r: SummationResult<Float>, what: &str) -> Result<Float> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::Inconclusive(format!("{what} did not converge")))
    }
}

fn round_rc(rc: &RecurrenceCoefficients, bits: u32) -> RecurrenceCoefficients {
    RecurrenceCoefficients {
        a: rc.a.iter().map(|x| Float::with_val(bits, x)).collect(),
        b: rc.b.iter().map(|x| Float::with_val(bits, x)).collect(),
    }
}
