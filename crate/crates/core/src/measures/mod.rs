//! Discrete measures with truncation bounds, their moments, and the
//! transformations relating the solutions of a moment problem to those of
//! its shifted, translated and weighted relatives.

mod density;
mod io;

pub use density::{
    classify_measure, density_index, estimate_a_bracket, ABracket, DensityIndex, DensityIndexReport,
    CLASSIFY_COEFFICIENTS,
};

use std::collections::BTreeMap;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{MomentSequence, MomentSource};
use crate::numerics::special::binomial;

/// Finitely many atoms of a (possibly infinite) discrete measure, together
/// with bounds on what the truncation left out.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    /// Strictly increasing.
    pub atoms: Vec<Float>,
    /// Positive.
    pub masses: Vec<Float>,
    /// Bound on the mass beyond the stored atoms (zero for a finite measure).
    pub tail_mass_bound: Float,
    /// degree n -> bound on Σ_tail m |x|^n.
    pub tail_moment_bounds: BTreeMap<usize, Float>,
    pub label: String,
}

/// A moment with the bound on its truncation error.
#[derive(Debug, Clone)]
pub struct MomentValue {
    pub value: Float,
    pub tail_bound: Float,
}

impl DiscreteMeasure {
    /// A finite measure (no tail).
    pub fn new(atoms: Vec<Float>, masses: Vec<Float>, label: impl Into<String>) -> Result<Self> {
        validate(&atoms, &masses)?;
        let prec = atoms.first().map_or(64, |a| a.prec());
        Ok(DiscreteMeasure {
            atoms,
            masses,
            tail_mass_bound: Float::new(prec),
            tail_moment_bounds: BTreeMap::new(),
            label: label.into(),
        })
    }

    pub fn with_tails(mut self, tail_mass_bound: Float, tail_moment_bounds: BTreeMap<usize, Float>) -> Self {
        self.tail_mass_bound = tail_mass_bound;
        self.tail_moment_bounds = tail_moment_bounds;
        self
    }

    /// Truncation of an infinite measure whose moment contributions
    /// m_k |x_k|^n eventually decay with decreasing ratios: the tail of degree
    /// n is estimated as c_K r / (1 - r) from the last contributions. Degrees
    /// where the last ratios are not below one get no bound.
    pub fn with_estimated_tails(
        atoms: Vec<Float>,
        masses: Vec<Float>,
        label: impl Into<String>,
        max_degree: usize,
    ) -> Result<Self> {
        let m = DiscreteMeasure::new(atoms, masses, label)?;
        let bounds = geometric_tail_bounds(&m.atoms, &m.masses, max_degree);
        let mass = bounds
            .get(&0)
            .cloned()
            .unwrap_or_else(|| Float::with_val(m.prec(), rug::float::Special::Infinity));
        Ok(m.with_tails(mass, bounds))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.atoms.first().map_or(64, |a| a.prec())
    }

    /// No mass beyond the stored atoms.
    pub fn is_exact(&self) -> bool {
        self.tail_mass_bound.is_zero()
    }

    pub fn total_mass(&self) -> Float {
        let mut s = Float::new(self.prec());
        for m in &self.masses {
            s += m;
        }
        s
    }

    /// Largest degree n such that every moment of degree <= n has a tail bound.
    pub fn max_bounded_degree(&self) -> Option<usize> {
        if self.is_exact() {
            return Some(usize::MAX);
        }
        let mut d = None;
        for n in 0.. {
            if self.tail_moment_bounds.contains_key(&n) {
                d = Some(n);
            } else {
                break;
            }
        }
        d
    }

    fn tail(&self, n: usize) -> Option<Float> {
        if self.is_exact() {
            Some(Float::new(self.prec()))
        } else {
            self.tail_moment_bounds.get(&n).cloned()
        }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn validate(atoms: &[Float], masses: &[Float]) -> Result<()> {
    if atoms.len() != masses.len() {
        return Err(Error::Length(format!("{} atoms but {} masses", atoms.len(), masses.len())));
    }
    if let Some(i) = atoms.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(format!("atoms not strictly increasing at index {}", i + 1)));
    }
    if let Some(i) = masses.iter().position(|m| !(*m > 0)) {
        return Err(Error::Domain(format!("mass {i} is not positive")));
    }
    Ok(())
}

/// See [`DiscreteMeasure::with_estimated_tails`].
pub fn geometric_tail_bounds(atoms: &[Float], masses: &[Float], max_degree: usize) -> BTreeMap<usize, Float> {
    let mut out = BTreeMap::new();
    let k = atoms.len();
    if k < 4 {
        return out;
    }
    let prec = atoms[0].prec();
    for n in 0..=max_degree {
        let c: Vec<Float> = (k - 4..k)
            .map(|i| {
                let x = Float::with_val(prec, atoms[i].abs_ref());
                Float::with_val(prec, &masses[i] * Float::with_val(prec, rug::ops::Pow::pow(&x, n as u32)))
            })
            .collect();
        let mut r = Float::new(prec);
        let mut ok = true;
        let mut prev_r: Option<Float> = None;
        for w in c.windows(2) {
            let ri = Float::with_val(prec, &w[1] / &w[0]);
            // ratios must be below one and not increasing
            if !(ri < 1) || prev_r.as_ref().is_some_and(|p| ri > *p) {
                ok = false;
                break;
            }
            if ri > r {
                r = ri.clone();
            }
            prev_r = Some(ri);
        }
        if !ok {
            break;
        }
        let last = &c[3];
        let tail = Float::with_val(prec, last * &r) / Float::with_val(prec, 1 - &r);
        out.insert(n, tail);
    }
    out
}

/// Σ m_i x_i^n with its truncation bound. Errors when the measure has a
/// tail but no bound for this degree.
pub fn moment(m: &DiscreteMeasure, n: usize) -> Result<MomentValue> {
    let tail = m.tail(n).ok_or(Error::MissingTailBound { degree: n })?;
    let prec = m.prec();
    let mut s = Float::new(prec);
    for (x, w) in m.atoms.iter().zip(&m.masses) {
        s += Float::with_val(prec, rug::ops::Pow::pow(x, n as u32)) * w;
    }
    Ok(MomentValue { value: s, tail_bound: tail })
}

/// s_0..s_{count-1}.
pub fn moments(m: &DiscreteMeasure, count: usize) -> Result<MomentSequence> {
    let mut vals = Vec::with_capacity(count);
    let prec = m.prec();
    let mut powers: Vec<Float> = m.atoms.iter().map(|_| Float::with_val(prec, 1)).collect();
    for n in 0..count {
        m.tail(n).ok_or(Error::MissingTailBound { degree: n })?;
        let mut s = Float::new(prec);
        for (pw, w) in powers.iter().zip(&m.masses) {
            s += pw * w;
        }
        vals.push(s);
        for (pw, x) in powers.iter_mut().zip(&m.atoms) {
            *pw *= x;
        }
    }
    Ok(MomentSequence::new(vals, MomentSource::FromMeasure))
}

/// Smallest point of the support.
pub fn xi(m: &DiscreteMeasure) -> Result<Float> {
    m.atoms
        .first()
        .cloned()
        .ok_or_else(|| Error::Domain("empty measure has no support".into()))
}

/// Image of `m` under x -> x + a.
pub fn translate(m: &DiscreteMeasure, a: &Float) -> DiscreteMeasure {
    let prec = m.prec();
    let atoms = m.atoms.iter().map(|x| Float::with_val(prec, x + a)).collect();
    let abs_a = Float::with_val(prec, a.abs_ref());
    let mut bounds = BTreeMap::new();
    if let Some(max) = m.max_bounded_degree() {
        if !m.is_exact() {
            // |x + a|^n <= Σ C(n,k) |a|^{n-k} |x|^k
            for n in 0..=max {
                let mut b = Float::new(prec);
                for k in 0..=n {
                    let t = Float::with_val(prec, &m.tail_moment_bounds[&k] * binomial(n as u64, k as u64, prec));
                    b += t * Float::with_val(prec, rug::ops::Pow::pow(&abs_a, (n - k) as u32));
                }
                bounds.insert(n, b);
            }
        }
    }
    DiscreteMeasure {
        atoms,
        masses: m.masses.clone(),
        tail_mass_bound: m.tail_mass_bound.clone(),
        tail_moment_bounds: bounds,
        label: format!("translate({}, {})", m.label, a.to_string_radix(10, Some(12))),
    }
}

/// Densities applied to a measure by [`apply_density`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    /// 1/x. An atom at 0 is an error unless `drop_zero_atom` is set.
    InverseX { drop_zero_atom: bool },
    /// (1 + x²)^(-α), α in [0, 1].
    InvOnePlusX2Pow { alpha: f64 },
    /// (1 + x²)^δ, δ >= 0.
    OnePlusX2Pow { delta: f64 },
    /// x - c.
    XMinusC { c: f64 },
    /// x^k.
    XPow { k: i32 },
}

impl DensitySpec {
    fn describe(&self) -> String {
        match self {
            DensitySpec::InverseX { .. } => "x^-1".into(),
            DensitySpec::InvOnePlusX2Pow { alpha } => format!("(1+x^2)^-{alpha}"),
            DensitySpec::OnePlusX2Pow { delta } => format!("(1+x^2)^{delta}"),
            DensitySpec::XMinusC { c } => format!("(x-{c})"),
            DensitySpec::XPow { k } => format!("x^{k}"),
        }
    }

    /// Density value at x, or None where it is undefined (1/0).
    fn value(&self, x: &Float) -> Option<Float> {
        let p = x.prec();
        let one_x2 = || Float::with_val(p, x.square_ref()) + 1u32;
        match self {
            DensitySpec::InverseX { .. } => (!x.is_zero()).then(|| Float::with_val(p, x.recip_ref())),
            DensitySpec::InvOnePlusX2Pow { alpha } => {
                Some(Float::with_val(p, rug::ops::Pow::pow(one_x2(), -Float::with_val(p, *alpha))))
            }
            DensitySpec::OnePlusX2Pow { delta } => {
                Some(Float::with_val(p, rug::ops::Pow::pow(one_x2(), Float::with_val(p, *delta))))
            }
            DensitySpec::XMinusC { c } => Some(Float::with_val(p, x - *c)),
            DensitySpec::XPow { k } => {
                if *k < 0 && x.is_zero() {
                    None
                } else {
                    Some(Float::with_val(p, rug::ops::Pow::pow(x, *k)))
                }
            }
        }
    }
}

/// The measure d(x) dm(x). Atoms where the density vanishes are dropped;
/// a negative density value is a domain error. Tail bounds follow from the
/// supremum of the density on the tail region (beyond the last atom).
pub fn apply_density(m: &DiscreteMeasure, d: &DensitySpec) -> Result<DiscreteMeasure> {
    match d {
        DensitySpec::InvOnePlusX2Pow { alpha } if !(0.0..=1.0).contains(alpha) => {
            return Err(Error::Domain(format!("alpha = {alpha} outside [0, 1]")))
        }
        DensitySpec::OnePlusX2Pow { delta } if *delta < 0.0 => {
            return Err(Error::Domain(format!("delta = {delta} is negative")))
        }
        _ => {}
    }
    let prec = m.prec();
    let mut atoms = Vec::with_capacity(m.len());
    let mut masses = Vec::with_capacity(m.len());
    for (x, w) in m.atoms.iter().zip(&m.masses) {
        let v = match d.value(x) {
            Some(v) => v,
            None => match d {
                DensitySpec::InverseX { drop_zero_atom: true } => continue,
                _ => {
                    return Err(Error::Domain(format!(
                        "density {} is undefined at the atom x = 0 of {}",
                        d.describe(),
                        m.label
                    )))
                }
            },
        };
        if v.is_sign_negative() && !v.is_zero() {
            return Err(Error::Domain(format!(
                "density {} is negative at x = {}",
                d.describe(),
                x.to_string_radix(10, Some(12))
            )));
        }
        if v.is_zero() {
            continue;
        }
        atoms.push(x.clone());
        masses.push(Float::with_val(prec, w * &v));
    }
    let label = format!("{} * {}", d.describe(), m.label);
    let mut out = DiscreteMeasure::new(atoms, masses, label)?;
    if m.is_exact() {
        return Ok(out);
    }
    let last = m.atoms.last().cloned().unwrap_or_else(|| Float::new(prec));
    let bound = |n: usize| m.tail_moment_bounds.get(&n).cloned();
    let max = m.max_bounded_degree().unwrap_or(0);
    let mut bounds = BTreeMap::new();
    let positive_tail = last > 0;
    for n in 0..=max {
        let b = match d {
            DensitySpec::InverseX { .. } if positive_tail => bound(n).map(|t| t / &last),
            DensitySpec::InverseX { .. } => None,
            DensitySpec::InvOnePlusX2Pow { .. } => {
                let sup = if positive_tail { d.value(&last) } else { Some(Float::with_val(prec, 1)) };
                bound(n).zip(sup).map(|(t, s)| t * s)
            }
            DensitySpec::OnePlusX2Pow { delta } => {
                let k = delta.ceil() as usize;
                let mut acc = Some(Float::new(prec));
                for j in 0..=k {
                    acc = acc
                        .zip(bound(n + 2 * j))
                        .map(|(a, t)| a + t * binomial(k as u64, j as u64, prec));
                }
                acc
            }
            DensitySpec::XMinusC { c } => bound(n + 1)
                .zip(bound(n))
                .map(|(t1, t0)| t1 + t0 * c.abs()),
            DensitySpec::XPow { k } if *k >= 0 => bound(n + *k as usize),
            DensitySpec::XPow { k } if positive_tail => {
                bound(n).map(|t| t * Float::with_val(prec, rug::ops::Pow::pow(&last, *k)))
            }
            DensitySpec::XPow { .. } => None,
        };
        match b {
            Some(b) => {
                bounds.insert(n, b);
            }
            None => break,
        }
    }
    let mass = bounds
        .get(&0)
        .cloned()
        .unwrap_or_else(|| Float::with_val(prec, rug::float::Special::Infinity));
    out = out.with_tails(mass, bounds);
    Ok(out)
}

/// (x - c) dm for a c held at full precision. The atom at c (if any) is
/// dropped; an atom below c is a domain error.
pub fn shift_weight(m: &DiscreteMeasure, c: &Float) -> Result<DiscreteMeasure> {
    let prec = m.prec();
    let mut atoms = Vec::with_capacity(m.len());
    let mut masses = Vec::with_capacity(m.len());
    for (x, w) in m.atoms.iter().zip(&m.masses) {
        if x < c {
            return Err(Error::Domain(format!(
                "atom {} lies below c = {}",
                x.to_string_radix(10, Some(12)),
                c.to_string_radix(10, Some(12))
            )));
        }
        if x == c {
            continue;
        }
        atoms.push(x.clone());
        masses.push(Float::with_val(prec, x - c) * w);
    }
    let label = format!("(x-{}) * {}", c.to_string_radix(10, Some(12)), m.label);
    let out = DiscreteMeasure::new(atoms, masses, label)?;
    if m.is_exact() {
        return Ok(out);
    }
    let abs_c = Float::with_val(prec, c.abs_ref());
    let mut bounds = BTreeMap::new();
    for n in 0.. {
        match (m.tail_moment_bounds.get(&(n + 1)), m.tail_moment_bounds.get(&n)) {
            (Some(t1), Some(t0)) => {
                bounds.insert(n, Float::with_val(prec, t1 + Float::with_val(prec, t0 * &abs_c)));
            }
            _ => break,
        }
    }
    let mass = bounds
        .get(&0)
        .cloned()
        .unwrap_or_else(|| Float::with_val(prec, rug::float::Special::Infinity));
    Ok(out.with_tails(mass, bounds))
}

/// s^(-1)[t] = (t, s_0, s_1, ...): moments of the problem whose solutions
/// are x^-1 dμ for solutions μ of s with an atom of mass t - F allowed at 0.
pub fn shifted_moment_sequence(s: &MomentSequence, t: &Float) -> Result<MomentSequence> {
    if !(*t > 0) {
        return Err(Error::Domain("shift parameter t must be positive".into()));
    }
    let mut v = Vec::with_capacity(s.len() + 1);
    v.push(Float::with_val(s.prec().max(t.prec()), t));
    v.extend(s.values().iter().cloned());
    Ok(MomentSequence::new(v, MomentSource::Transformed))
}

/// s̃_n = s_{n+1} - c s_n (moments of (x - c) dμ).
pub fn tilde_moment_sequence(s: &MomentSequence, c: &Float) -> Result<MomentSequence> {
    if s.len() < 2 {
        return Err(Error::Length("need at least two moments".into()));
    }
    let v = s
        .values()
        .windows(2)
        .map(|w| Float::with_val(w[0].prec(), &w[1] - Float::with_val(w[0].prec(), &w[0] * c)))
        .collect();
    Ok(MomentSequence::new(v, MomentSource::Transformed))
}

/// Add an atom at 0 of mass t - F to `m` (which must sit on (0, ∞)).
pub fn krein_completion(m: &DiscreteMeasure, t: &Float, f: &Float) -> Result<DiscreteMeasure> {
    if !(*t > *f) {
        return Err(Error::Domain(format!(
            "completion needs t > F (t = {}, F = {})",
            t.to_string_radix(10, Some(12)),
            f.to_string_radix(10, Some(12))
        )));
    }
    if m.atoms.iter().any(|x| x.is_zero()) {
        return Err(Error::Conflict(format!("{} already has an atom at 0", m.label)));
    }
    if m.atoms.first().is_some_and(|x| x.is_sign_negative()) {
        return Err(Error::Domain(format!("{} has atoms below 0", m.label)));
    }
    let prec = m.prec();
    let mut atoms = vec![Float::new(prec)];
    atoms.extend(m.atoms.iter().cloned());
    let mut masses = vec![Float::with_val(prec, t - f)];
    masses.extend(m.masses.iter().cloned());
    Ok(DiscreteMeasure {
        atoms,
        masses,
        tail_mass_bound: m.tail_mass_bound.clone(),
        tail_moment_bounds: m.tail_moment_bounds.clone(),
        label: format!("krein_completion({}, t = {})", m.label, t.to_string_radix(10, Some(12))),
    })
}
