use rug::Float;
use serde::{Deserialize, Serialize};

use super::{MomentSequence, RecurrenceCoefficients};
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

/// Outcome of a Cholesky factorization of the Hankel matrix (s_{i+j}).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HankelReport {
    pub positive_definite: bool,
    /// Precision of the last attempt on the ladder.
    pub bits_used: u32,
    /// Largest log2(H_kk / pivot_k) seen: bits lost to cancellation.
    pub max_loss_bits: f64,
    /// First pivot that failed, if any.
    pub failed_index: Option<usize>,
    /// The failing pivot was positive but below tolerance.
    pub marginal: bool,
}

enum Factor {
    Done { r: Vec<Vec<Float>>, max_loss: f64 },
    Failed { index: usize, marginal: bool, max_loss: f64 },
}

fn loss_bits(diag: &Float, pivot: &Float) -> f64 {
    let ratio = Float::with_val(64, diag / pivot);
    ratio.log2().to_f64()
}

/// Upper-triangular R with H = RᵀR, rows stored from the diagonal on
/// (`r[k][j]` is R_{k, k+j}). A pivot counts as collapsed when it is not
/// positive or when more than half the working bits cancelled.
fn cholesky(s: &[Float], size: usize, bits: u32) -> Factor {
    let h = |i: usize, j: usize| Float::with_val(bits, &s[i + j]);
    let mut r: Vec<Vec<Float>> = Vec::with_capacity(size);
    let mut max_loss = 0f64;
    let half = bits as f64 / 2.0;
    for k in 0..size {
        let diag = h(k, k);
        let mut d = diag.clone();
        for (j, row) in r.iter().enumerate() {
            let rjk = &row[k - j];
            d -= rjk * rjk;
        }
        if d <= 0 || diag <= 0 {
            return Factor::Failed {
                index: k,
                marginal: false,
                max_loss,
            };
        }
        let loss = loss_bits(&diag, &d);
        max_loss = max_loss.max(loss);
        if loss > half {
            return Factor::Failed {
                index: k,
                marginal: true,
                max_loss,
            };
        }
        let rkk = d.sqrt();
        let mut row = Vec::with_capacity(size - k);
        row.push(rkk.clone());
        for l in k + 1..size {
            let mut acc = h(k, l);
            for (j, prev) in r.iter().enumerate() {
                acc -= &prev[k - j] * &prev[l - j];
            }
            acc /= &rkk;
            row.push(acc);
        }
        r.push(row);
    }
    Factor::Done { r, max_loss }
}

fn factor_with_ladder(s: &[Float], size: usize, ctx: &PrecisionContext) -> (Factor, u32) {
    let mut work = ctx.clone();
    loop {
        let f = cholesky(s, size, work.bits);
        match f {
            Factor::Done { .. } => return (f, work.bits),
            Factor::Failed { .. } => match work.escalated() {
                Some(next) => work = next,
                None => return (f, work.bits),
            },
        }
    }
}

/// Cholesky of the (m+1)×(m+1) Hankel matrix with the full diagnostics.
pub fn hankel_report(s: &MomentSequence, m: usize, ctx: &PrecisionContext) -> Result<HankelReport> {
    if s.len() < 2 * m + 1 {
        return Err(Error::Length(format!(
            "Hankel matrix of order {} needs {} moments, got {}",
            m + 1,
            2 * m + 1,
            s.len()
        )));
    }
    let (f, bits) = factor_with_ladder(s.values(), m + 1, ctx);
    Ok(match f {
        Factor::Done { max_loss, .. } => HankelReport {
            positive_definite: true,
            bits_used: bits,
            max_loss_bits: max_loss,
            failed_index: None,
            marginal: false,
        },
        Factor::Failed {
            index,
            marginal,
            max_loss,
        } => HankelReport {
            positive_definite: false,
            bits_used: bits,
            max_loss_bits: max_loss,
            failed_index: Some(index),
            marginal,
        },
    })
}

/// Whether (s_{i+j})_{i,j<=m} is positive definite. Failing pivots are
/// retried up the precision ladder; a pivot that is still positive but
/// below tolerance at the ceiling is reported as inconclusive.
pub fn hankel_positive_definite(s: &MomentSequence, m: usize, ctx: &PrecisionContext) -> Result<bool> {
    let rep = hankel_report(s, m, ctx)?;
    if rep.marginal {
        return Err(Error::Inconclusive(format!(
            "Hankel pivot {} is marginal at the precision ceiling ({} bits)",
            rep.failed_index.unwrap_or(0),
            rep.bits_used
        )));
    }
    Ok(rep.positive_definite)
}

/// Jacobi coefficients a_0..a_{n_max}, b_0..b_{n_max} of the measure with
/// moments `s`, read off the Cholesky factor of the Hankel matrix of order
/// n_max+2 (so `s` must hold at least 2·n_max+3 moments). The sequence need
/// not be normalized.
pub fn recurrence_from_moments(
    s: &MomentSequence,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<RecurrenceCoefficients> {
    let size = n_max + 2;
    if s.len() < 2 * size - 1 {
        return Err(Error::Length(format!(
            "{} coefficients need {} moments, got {}",
            n_max + 1,
            2 * size - 1,
            s.len()
        )));
    }
    let (f, bits) = factor_with_ladder(s.values(), size, ctx);
    let r = match f {
        Factor::Done { r, .. } => r,
        Factor::Failed { index, marginal, .. } => {
            return Err(Error::PivotCollapse {
                index,
                bits,
                detail: if marginal {
                    "pivot below 2^(-bits/2) relative tolerance".into()
                } else {
                    "non-positive pivot".into()
                },
            })
        }
    };
    let p = ctx.bits;
    let mut a = Vec::with_capacity(n_max + 1);
    let mut b = Vec::with_capacity(n_max + 1);
    let mut prev_ratio = Float::new(bits);
    for k in 0..=n_max {
        let rkk = &r[k][0];
        let ratio = Float::with_val(bits, &r[k][1] / rkk);
        a.push(Float::with_val(p, &r[k + 1][0] / rkk));
        b.push(Float::with_val(p, &ratio - &prev_ratio));
        prev_ratio = ratio;
    }
    RecurrenceCoefficients::new(a, b)
}
