//! Moment sequences, Hankel positivity, three-term recurrences and the
//! orthonormal polynomials of the first and second kind.

mod hankel;
mod polys;

pub use hankel::{hankel_positive_definite, hankel_report, recurrence_from_moments, HankelReport};
pub use polys::{
    eval_pq, eval_pq_real, jacobi_apply, moments_from_recurrence, polynomial_zeros, smallest_polynomial_zero,
    zeros_above, PolynomialPair, RecurrenceCoefficients,
};

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{parse_float, to_decimal};

/// Where a moment sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentSource {
    ClosedForm,
    FromMeasure,
    Transformed,
}

/// A finite prefix s_0, s_1, ... of a moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<Float>,
    pub source: MomentSource,
}

impl MomentSequence {
    pub fn new(values: Vec<Float>, source: MomentSource) -> Self {
        MomentSequence { values, source }
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Float> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&Float> {
        self.values.get(n)
    }

    pub fn normalized(&self) -> bool {
        self.values.first().is_some_and(|s0| *s0 == 1)
    }

    pub fn prec(&self) -> u32 {
        self.values.first().map_or(64, |v| v.prec())
    }

    pub fn truncated(&self, n: usize) -> Self {
        MomentSequence {
            values: self.values[..n.min(self.len())].to_vec(),
            source: self.source,
        }
    }

    /// JSON array of lossless decimal strings.
    pub fn to_json(&self) -> String {
        let strs: Vec<String> = self.values.iter().map(to_decimal).collect();
        serde_json::to_string(&strs).expect("string array serializes")
    }

    pub fn from_json(json: &str, prec: u32, source: MomentSource) -> Result<Self> {
        let strs: Vec<String> = serde_json::from_str(json)?;
        let values = strs.iter().map(|s| parse_float(s, prec)).collect::<Result<Vec<_>>>()?;
        Ok(MomentSequence { values, source })
    }
}

/// Divide by s_0 so that s_0 = 1.
pub fn normalize(s: &MomentSequence) -> Result<MomentSequence> {
    let s0 = s.get(0).ok_or_else(|| Error::Length("empty moment sequence".into()))?;
    if *s0 <= 0 {
        return Err(Error::Domain(format!(
            "s_0 = {} must be positive",
            s0.to_string_radix(10, Some(10))
        )));
    }
    let values = s
        .values
        .iter()
        .map(|v| Float::with_val(v.prec(), v / s0))
        .collect();
    Ok(MomentSequence {
        values,
        source: s.source,
    })
}
