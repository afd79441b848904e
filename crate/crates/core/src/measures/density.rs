use serde::{Deserialize, Serialize};

use super::{apply_density, moments, DensitySpec, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::moments::recurrence_from_moments;
use crate::nevanlinna::{classify, Determinacy, DeterminacyVerdict};
use crate::numerics::PrecisionContext;

/// Recurrence length used when classifying a measure from its atoms.
pub const CLASSIFY_COEFFICIENTS: usize = 40;
const MIN_COEFFICIENTS: usize = 32;

/// Classify the moment problem of a truncated measure: moments from the
/// atoms, Jacobi coefficients by Cholesky, then the growth test.
pub fn classify_measure(m: &DiscreteMeasure, ctx: &PrecisionContext) -> Result<DeterminacyVerdict> {
    let by_degree = m.max_bounded_degree().unwrap_or(0) / 2;
    let by_atoms = m.len().saturating_sub(8);
    let nc = CLASSIFY_COEFFICIENTS.min(by_degree).min(by_atoms);
    if nc < MIN_COEFFICIENTS {
        return Err(Error::Length(format!(
            "{} supports only {nc} recurrence coefficients (atoms {}, bounded degree {:?}); need {MIN_COEFFICIENTS}",
            m.label,
            m.len(),
            m.max_bounded_degree()
        )));
    }
    let s = moments(m, 2 * nc + 1)?;
    let rc = recurrence_from_moments(&s, nc - 1, ctx)?;
    classify(&rc, ctx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum DensityIndex {
    /// Determinate for all k <= δ, indeterminate at δ + 1.
    Exact(usize),
    /// Determinate for every k examined.
    AtLeast(usize),
    /// Already indeterminate at k = 0.
    Undefined,
    /// A verdict at this k was inconclusive before the index was settled.
    Inconclusive(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityIndexReport {
    pub index: DensityIndex,
    /// Verdict for (1 + x²)^-1 x^k dσ, k = 0, 1, ...
    pub verdicts: Vec<(usize, Determinacy)>,
    /// Geometric ratio fitted at each k (NaN if the pipeline failed).
    pub ratios: Vec<f64>,
}

fn verdict_or_inconclusive(r: Result<DeterminacyVerdict>) -> (Determinacy, f64) {
    match r {
        Ok(v) => (v.verdict, v.evidence.ratio),
        Err(_) => (Determinacy::Inconclusive, f64::NAN),
    }
}

/// Largest k such that (1 + x²)^-1 x^k dσ is determinate for all smaller k.
pub fn density_index(m: &DiscreteMeasure, k_max: usize, ctx: &PrecisionContext) -> Result<DensityIndexReport> {
    let base = apply_density(m, &DensitySpec::InvOnePlusX2Pow { alpha: 1.0 })?;
    let mut verdicts = Vec::new();
    let mut ratios = Vec::new();
    let mut index = DensityIndex::AtLeast(k_max);
    for k in 0..=k_max {
        let weighted = apply_density(&base, &DensitySpec::XPow { k: k as i32 })?;
        let (v, r) = verdict_or_inconclusive(classify_measure(&weighted, ctx));
        verdicts.push((k, v));
        ratios.push(r);
        match v {
            Determinacy::Determinate => continue,
            Determinacy::Indeterminate => {
                index = if k == 0 { DensityIndex::Undefined } else { DensityIndex::Exact(k - 1) };
                break;
            }
            Determinacy::Inconclusive => {
                index = DensityIndex::Inconclusive(k);
                break;
            }
        }
    }
    Ok(DensityIndexReport { index, verdicts, ratios })
}

/// Bracket [lo, hi] for the exponent separating indeterminate from
/// determinate weights (1 + x²)^-α dμ, read off a grid of α values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ABracket {
    pub lo: f64,
    pub hi: f64,
    pub verdicts: Vec<(f64, Determinacy)>,
}

/// lo is the largest grid α with every α' <= α indeterminate (0 if none),
/// hi the smallest grid α with every α' >= α determinate (1 if none);
/// inconclusive grid points therefore widen the bracket.
pub fn estimate_a_bracket(m: &DiscreteMeasure, grid: &[f64], ctx: &PrecisionContext) -> Result<ABracket> {
    let mut grid: Vec<f64> = grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("grid values are finite"));
    let mut verdicts = Vec::with_capacity(grid.len());
    for &alpha in &grid {
        let weighted = apply_density(m, &DensitySpec::InvOnePlusX2Pow { alpha })?;
        let (v, _) = verdict_or_inconclusive(classify_measure(&weighted, ctx));
        verdicts.push((alpha, v));
    }
    let mut lo = 0.0;
    for (a, v) in &verdicts {
        if *v == Determinacy::Indeterminate {
            lo = *a;
        } else {
            break;
        }
    }
    let mut hi = 1.0;
    for (a, v) in verdicts.iter().rev() {
        if *v == Determinacy::Determinate {
            hi = *a;
        } else {
            break;
        }
    }
    Ok(ABracket { lo, hi, verdicts })
}
