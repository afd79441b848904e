//! Verification drivers: each theorem id runs a list of numeric checks on
//! one family and assembles a deterministic report.

use std::collections::BTreeMap;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{FamilyHandle, Solution};
use crate::measures::{
    apply_density, classify_measure, density_index, moment, moments, shift_weight, DensityIndex, DensitySpec,
    DiscreteMeasure,
};
use crate::moments::{normalize, polynomial_zeros, recurrence_from_moments, MomentSequence, RecurrenceCoefficients};
use crate::nevanlinna::{
    friedrichs_parameter, interlaces, mass_at, nevanlinna_eval, nextremal_support, parameter_of_point, Determinacy,
    DeterminacyVerdict, Parameter, StieltjesClass,
};
use crate::numerics::{bracketed_root, PrecisionContext};

/// Theorem ids understood by [`verify`].
pub const THEOREM_IDS: [&str; 8] = ["T3.1", "C3.2", "T3.4", "T3.5", "T3.6/C3.7", "P1.6", "E1.10", "P3.2i"];

/// Relative tolerance for moment identities.
pub const MOMENT_TOL: f64 = 1e-12;
/// Tolerance for transform identities (Σ m/x, parameters of points).
pub const TRANSFORM_TOL: f64 = 1e-10;
/// Tolerance for quantities read off a short recovered recurrence.
pub const RECOVERED_TOL: f64 = 1e-6;
/// Degrees checked in moment identities.
const MOMENT_DEGREES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub description: String,
    pub expected: String,
    pub observed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub outcome: Outcome,
}

impl Check {
    fn new(description: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, tolerance: Option<f64>, outcome: Outcome) -> Self {
        Check {
            description: description.into(),
            expected: expected.into(),
            observed: observed.into(),
            tolerance,
            outcome,
        }
    }

    fn error(description: impl Into<String>, expected: impl Into<String>, e: &Error) -> Self {
        Check::new(description, expected, format!("error: {e}"), None, Outcome::Inconclusive)
    }
}

/// Numeric settings a run used; embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub bits: u32,
    pub max_terms: usize,
    pub tail_tol: f64,
    pub max_bits: u32,
}

impl From<&PrecisionContext> for RunConfig {
    fn from(c: &PrecisionContext) -> Self {
        RunConfig {
            bits: c.bits,
            max_terms: c.max_terms,
            tail_tol: c.tail_tol,
            max_bits: c.max_bits,
        }
    }
}

/// Optional theorem parameters; unset values get per-family defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    /// The N-extremal parameter t (decimal string); defaults to 1 for
    /// Stieltjes–Wigert and 2F otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    /// Second parameter t' of T3.4; defaults to F.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<String>,
    /// Atoms per constructed measure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub family: FamilyHandle,
    /// Resolved parameters (t, t', F, atom count, ...).
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub overall: Outcome,
    /// Working precision of the family computations.
    pub precision_bits: u32,
    /// Settings the run was started with.
    pub config: RunConfig,
    /// Wall-clock time, present only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    /// Fail if any check fails, inconclusive if any is inconclusive (or
    /// there are no checks), pass otherwise.
    pub fn summarize(checks: &[Check]) -> Outcome {
        if checks.iter().any(|c| c.outcome == Outcome::Fail) {
            Outcome::Fail
        } else if checks.is_empty() || checks.iter().any(|c| c.outcome == Outcome::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        }
    }

    /// 0 pass, 2 fail, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
            Outcome::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["theorem_id", "family", "description", "expected", "observed", "tolerance", "outcome"])?;
        let family = self.family.to_string();
        for c in &self.checks {
            let tol = c.tolerance.map(|t| format!("{t:e}")).unwrap_or_default();
            w.write_record([
                self.theorem_id.as_str(),
                family.as_str(),
                c.description.as_str(),
                c.expected.as_str(),
                c.observed.as_str(),
                tol.as_str(),
                c.outcome.as_str(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("report fields are UTF-8"))
    }
}

// ------------------------------------------------------------ formatting

fn fmt(x: &Float) -> String {
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    x.to_string_radix(10, Some(20))
}

fn fmt_param(p: &Parameter) -> String {
    match p {
        Parameter::Infinite => "inf".into(),
        Parameter::Finite(v) => fmt(v),
    }
}

fn fmt_verdict(v: &DeterminacyVerdict) -> String {
    let e = &v.evidence;
    format!(
        "{:?} ({}), rule {}, ratio {:.6}, halves ({:.6}, {:.6}), exponent {:.4}, margin {:.3}",
        v.verdict, v.stieltjes_class, e.rule, e.ratio, e.half_ratios.0, e.half_ratios.1, e.exponent, e.margin
    )
    .to_lowercase()
}

// ---------------------------------------------------------- check builders

/// |observed - expected| <= tol·|expected| (absolute when expected = 0).
/// A truncation `slack` that could by itself breach the tolerance makes the
/// check inconclusive unless the error already exceeds tolerance plus slack.
fn rel_check(description: impl Into<String>, expected: &Float, observed: &Float, slack: &Float, tol: f64) -> Check {
    let p = expected.prec().max(observed.prec());
    let err = Float::with_val(p, observed - expected).abs();
    let scale = if expected.is_zero() {
        Float::with_val(p, 1)
    } else {
        Float::with_val(p, expected.abs_ref())
    };
    let allowed = Float::with_val(p, &scale * tol);
    let outcome = if err <= allowed && *slack <= allowed {
        Outcome::Pass
    } else if err > Float::with_val(p, &allowed + slack) {
        Outcome::Fail
    } else {
        Outcome::Inconclusive
    };
    let rel = Float::with_val(64, &err / &scale).to_f64();
    Check::new(
        description,
        fmt(expected),
        format!("{} (rel. error {rel:.3e})", fmt(observed)),
        Some(tol),
        outcome,
    )
}

fn bool_check(description: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, ok: bool) -> Check {
    Check::new(description, expected, observed, None, if ok { Outcome::Pass } else { Outcome::Fail })
}

fn verdict_check(
    description: impl Into<String>,
    expected: Determinacy,
    class: Option<StieltjesClass>,
    result: Result<DeterminacyVerdict>,
) -> Check {
    let exp = match class {
        Some(c) => format!("{expected:?} ({c})").to_lowercase(),
        None => format!("{expected:?}").to_lowercase(),
    };
    match result {
        Err(e) => Check::error(description, exp, &e),
        Ok(v) => {
            let outcome = if v.verdict == Determinacy::Inconclusive {
                Outcome::Inconclusive
            } else if v.verdict != expected {
                Outcome::Fail
            } else {
                match class {
                    Some(_) if v.stieltjes_class == StieltjesClass::NotApplicable => Outcome::Inconclusive,
                    Some(c) if v.stieltjes_class != c => Outcome::Fail,
                    _ => Outcome::Pass,
                }
            };
            Check::new(description, exp, fmt_verdict(&v), None, outcome)
        }
    }
}

fn index_check(description: impl Into<String>, expected: usize, m: Result<DiscreteMeasure>, ctx: &PrecisionContext) -> Check {
    let exp = format!("exact({expected})");
    let r = m.and_then(|m| density_index(&m, expected + 2, ctx));
    match r {
        Err(e) => Check::error(description, exp, &e),
        Ok(rep) => {
            let ratios: Vec<String> = rep.ratios.iter().map(|r| format!("{r:.4}")).collect();
            let observed = format!("{:?}, ratios [{}]", rep.index, ratios.join(", ")).to_lowercase();
            let outcome = match rep.index {
                DensityIndex::Exact(k) if k == expected => Outcome::Pass,
                DensityIndex::Inconclusive(_) => Outcome::Inconclusive,
                _ => Outcome::Fail,
            };
            Check::new(description, exp, observed, None, outcome)
        }
    }
}

fn moment_checks(out: &mut Vec<Check>, what: &str, m: &Result<DiscreteMeasure>, expected: &Result<Vec<Float>>, degrees: std::ops::Range<usize>) {
    for n in degrees {
        let desc = format!("moment {n} of {what}");
        match (m, expected) {
            (Err(e), _) | (_, Err(e)) => out.push(Check::error(desc, "-", e)),
            (Ok(m), Ok(exp)) => match (moment(m, n), exp.get(n)) {
                (Ok(v), Some(x)) => out.push(rel_check(desc, x, &v.value, &v.tail_bound, MOMENT_TOL)),
                (Err(e), _) => out.push(Check::error(desc, "-", &e)),
                (_, None) => out.push(Check::error(desc, "-", &Error::Length(format!("no expected value for degree {n}")))),
            },
        }
    }
}

// ------------------------------------------------------------- workbench

/// Lazily built objects shared by the checks of one report.
struct Bench<'a> {
    family: &'a FamilyHandle,
    ctx: PrecisionContext,
    count: usize,
    f: Result<Float>,
    t: Option<Float>,
    rc: Option<Result<RecurrenceCoefficients>>,
    mu_f: Option<Result<DiscreteMeasure>>,
    mu_k: Option<Result<DiscreteMeasure>>,
    mu_t: BTreeMap<String, Result<DiscreteMeasure>>,
    s: Option<Result<Vec<Float>>>,
    params: BTreeMap<String, String>,
}

fn copy<T: Clone>(r: &Result<T>) -> Result<T> {
    match r {
        Ok(v) => Ok(v.clone()),
        Err(e) => Err(Error::Inconclusive(e.to_string())),
    }
}

/// A user-supplied parameter: "F" names the Friedrichs parameter, and a
/// decimal within 1e-15 (relative) of F is taken to mean F, since printed
/// values of F are rounded.
fn resolve_parameter(s: &str, f: &Result<Float>, prec: u32) -> Result<Parameter> {
    if s.trim() == "F" {
        return match f {
            Ok(f) => Ok(Parameter::Finite(f.clone())),
            Err(e) => Err(Error::Inconclusive(format!("t = F requested but F is unavailable: {e}"))),
        };
    }
    let v = Parameter::parse(s, prec)?;
    if let (Parameter::Finite(x), Ok(f)) = (&v, f) {
        let d = Float::with_val(prec, x - f).abs();
        if d <= Float::with_val(prec, f.abs_ref()) * 1e-15 {
            return Ok(Parameter::Finite(f.clone()));
        }
    }
    Ok(v)
}

impl<'a> Bench<'a> {
    fn new(family: &'a FamilyHandle, params: &VerifyParams, ctx: &PrecisionContext) -> Result<Self> {
        let w = family.working_context(ctx);
        let count = params.count.unwrap_or(match family {
            FamilyHandle::Quartic => 120,
            _ => 64,
        });
        let f = family.friedrichs_value(&w);
        let t = match &params.t {
            Some(s) => match resolve_parameter(s, &f, w.bits)? {
                Parameter::Finite(v) => Some(v),
                Parameter::Infinite => return Err(Error::Usage("t must be finite here (the Krein solution is built in)".into())),
            },
            None => match (family, &f) {
                (FamilyHandle::StieltjesWigert { .. }, _) => Some(w.one()),
                (_, Ok(f)) => Some(Float::with_val(w.bits, f * 2u32)),
                (_, Err(_)) => None,
            },
        };
        let mut p = BTreeMap::new();
        p.insert("count".to_string(), count.to_string());
        p.insert("tail_tol_working".to_string(), format!("{:e}", w.tail_tol));
        p.insert(
            "F".to_string(),
            match &f {
                Ok(v) => fmt(v),
                Err(e) => format!("error: {e}"),
            },
        );
        if let Some(t) = &t {
            p.insert("t".to_string(), fmt(t));
        }
        Ok(Bench {
            family,
            ctx: w,
            count,
            f,
            t,
            rc: None,
            mu_f: None,
            mu_k: None,
            mu_t: BTreeMap::new(),
            s: None,
            params: p,
        })
    }

    fn f(&self) -> Result<Float> {
        copy(&self.f)
    }

    fn t(&self) -> Result<Float> {
        self.t
            .clone()
            .ok_or_else(|| Error::Inconclusive("no default t without the Friedrichs parameter".into()))
    }

    fn rc(&mut self) -> Result<RecurrenceCoefficients> {
        if self.rc.is_none() {
            let len = self.family.default_recurrence_len(&self.ctx);
            self.rc = Some(self.family.recurrence(len, &self.ctx));
        }
        copy(self.rc.as_ref().expect("set above"))
    }

    fn mu_f(&mut self) -> Result<DiscreteMeasure> {
        if self.mu_f.is_none() {
            self.mu_f = Some(self.family.solution(&Solution::Friedrichs, self.count, &self.ctx));
        }
        copy(self.mu_f.as_ref().expect("set above"))
    }

    fn mu_k(&mut self) -> Result<DiscreteMeasure> {
        if self.mu_k.is_none() {
            self.mu_k = Some(self.family.solution(&Solution::Krein, self.count, &self.ctx));
        }
        copy(self.mu_k.as_ref().expect("set above"))
    }

    /// μ_t; t = F is served by μ_F.
    fn mu_t(&mut self, t: &Float) -> Result<DiscreteMeasure> {
        if let Ok(f) = &self.f {
            if t == f {
                return self.mu_f();
            }
        }
        let key = fmt(t);
        if !self.mu_t.contains_key(&key) {
            let m = self.family.solution(&Solution::T(t.clone()), self.count, &self.ctx);
            self.mu_t.insert(key.clone(), m);
        }
        copy(&self.mu_t[&key])
    }

    /// Moments s_0, s_1, ... of the family (enough for the identities).
    fn s(&mut self) -> Result<Vec<Float>> {
        if self.s.is_none() {
            let r = self
                .family
                .moments(MOMENT_DEGREES + 2, &self.ctx)
                .map(MomentSequence::into_values);
            self.s = Some(r);
        }
        copy(self.s.as_ref().expect("set above"))
    }

    fn require_t_above_f(&self) -> Result<(Float, Float)> {
        let t = self.t()?;
        let f = self.f()?;
        if t > f {
            Ok((t, f))
        } else {
            Err(Error::Usage(format!("this theorem needs t > F (t = {}, F = {})", fmt(&t), fmt(&f))))
        }
    }
}

// ----------------------------------------------------------------- verify

/// Run the checks for `theorem_id` on `family`.
pub fn verify(theorem_id: &str, family: &FamilyHandle, params: &VerifyParams, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if !THEOREM_IDS.contains(&theorem_id) {
        return Err(Error::Usage(format!(
            "unknown theorem id {theorem_id:?} (expected one of {})",
            THEOREM_IDS.join(", ")
        )));
    }
    ctx.validate()?;
    family.validate()?;
    let mut b = Bench::new(family, params, ctx)?;
    let mut checks = Vec::new();
    match theorem_id {
        "T3.1" => check_t31(&mut b, &mut checks)?,
        "C3.2" => check_c32(&mut b, &mut checks),
        "T3.4" => check_t34(&mut b, params, &mut checks)?,
        "T3.5" => check_t35(&mut b, &mut checks),
        "T3.6/C3.7" => check_t36(&mut b, &mut checks)?,
        "P1.6" => check_p16(&mut b, &mut checks),
        "E1.10" => check_e110(&mut b, &mut checks),
        "P3.2i" => check_p32i(&mut b, &mut checks),
        _ => unreachable!("ids validated above"),
    }
    let overall = VerificationReport::summarize(&checks);
    Ok(VerificationReport {
        theorem_id: theorem_id.to_string(),
        family: family.clone(),
        params: b.params,
        checks,
        overall,
        precision_bits: b.ctx.bits,
        config: RunConfig::from(ctx),
        runtime_ms: None,
    })
}

fn inverse_x(m: &Result<DiscreteMeasure>) -> Result<DiscreteMeasure> {
    apply_density(m.as_ref().map_err(|e| Error::Inconclusive(e.to_string()))?, &DensitySpec::InverseX { drop_zero_atom: false })
}

fn weighted(m: &Result<DiscreteMeasure>, d: &DensitySpec) -> Result<DiscreteMeasure> {
    apply_density(m.as_ref().map_err(|e| Error::Inconclusive(e.to_string()))?, d)
}

fn classify_result(m: Result<DiscreteMeasure>, ctx: &PrecisionContext) -> Result<DeterminacyVerdict> {
    m.and_then(|m| classify_measure(&m, ctx))
}

/// x^-1 dμ_t solves (t, s_0, s_1, ...); x^-1 dμ_F is determinate while
/// x^-1 dμ_t is indet(S); the Krein completion has mass t.
fn check_t31(b: &mut Bench, out: &mut Vec<Check>) -> Result<()> {
    let (t, f) = b.require_t_above_f()?;
    let ctx = b.ctx.clone();
    let s = b.s();
    let mu_t = b.mu_t(&t);
    let mu_f = b.mu_f();
    for (name, m, total) in [("x^-1 dmu_t", &mu_t, &t), ("x^-1 dmu_F", &mu_f, &f)] {
        let inv = inverse_x(m);
        let expected = copy(&s).map(|s| {
            let mut v = vec![total.clone()];
            v.extend(s);
            v
        });
        moment_checks(out, name, &inv, &expected, 0..MOMENT_DEGREES);
    }
    out.push(verdict_check(
        "x^-1 dmu_F is determinate",
        Determinacy::Determinate,
        None,
        classify_result(inverse_x(&mu_f), &ctx),
    ));
    out.push(verdict_check(
        "x^-1 dmu_t is indeterminate and indet(S)",
        Determinacy::Indeterminate,
        Some(StieltjesClass::IndetS),
        classify_result(inverse_x(&mu_t), &ctx),
    ));
    let completion = inverse_x(&mu_f).and_then(|m| crate::measures::krein_completion(&m, &t, &f));
    match completion.and_then(|m| moment(&m, 0).map(|v| (m, v))) {
        Ok((m, v)) => {
            out.push(rel_check("total mass of (t - F) delta_0 + x^-1 dmu_F", &t, &v.value, &v.tail_bound, MOMENT_TOL));
            let zero = Float::new(ctx.bits);
            let tf = Float::with_val(ctx.bits, &t - &f);
            let at0 = if m.atoms.first() == Some(&zero) { m.masses[0].clone() } else { zero.clone() };
            out.push(rel_check("mass of the completion at 0", &tf, &at0, &zero, MOMENT_TOL));
        }
        Err(e) => out.push(Check::error("total mass of (t - F) delta_0 + x^-1 dmu_F", fmt(&t), &e)),
    }
    match b.rc().and_then(|rc| friedrichs_parameter(&rc, &ctx)) {
        Ok(fp) => {
            let obs = match &fp.friedrichs {
                Parameter::Finite(v) => v.clone(),
                Parameter::Infinite => Float::with_val(ctx.bits, rug::float::Special::Infinity),
            };
            let mut c = rel_check("F from lim p_n(0)/q_n(0) matches the closed form", &f, &obs, &Float::new(ctx.bits), 1e-8);
            if !fp.converged && c.outcome == Outcome::Pass {
                c.outcome = Outcome::Inconclusive;
            }
            out.push(c);
        }
        Err(e) => out.push(Check::error("F from lim p_n(0)/q_n(0) matches the closed form", fmt(&f), &e)),
    }
    Ok(())
}

/// x dμ_t solves (s_1, s_2, ...); density indices 1, 0, 2 for μ_F, μ_t, μ_K
/// and 0, 1 for x dμ_F, x dμ_K.
fn check_c32(b: &mut Bench, out: &mut Vec<Check>) {
    let ctx = b.ctx.clone();
    let s = b.s();
    let shifted = copy(&s).map(|s| s[1..].to_vec());
    let mu_f = b.mu_f();
    let mu_k = b.mu_k();
    let mu_t = b.t().and_then(|t| b.mu_t(&t));
    let x = DensitySpec::XPow { k: 1 };
    for (name, m) in [("x dmu_F", &mu_f), ("x dmu_t", &mu_t), ("x dmu_K", &mu_k)] {
        moment_checks(out, name, &weighted(m, &x), &copy(&shifted), 0..MOMENT_DEGREES);
    }
    out.push(index_check("density index of mu_F", 1, copy(&mu_f), &ctx));
    out.push(index_check("density index of mu_t", 0, copy(&mu_t), &ctx));
    out.push(index_check("density index of mu_K", 2, copy(&mu_k), &ctx));
    out.push(index_check("density index of x dmu_F", 0, weighted(&mu_f, &x), &ctx));
    out.push(index_check("density index of x dmu_K (the Friedrichs solution of s_{n+1})", 1, weighted(&mu_k, &x), &ctx));
}

/// ν_{t'} = (x - c_t) dμ_{t'} solves s_{n+1} - c_t s_n; ν_t is its
/// Friedrichs solution; (x - ξ_1) dμ_F is determinate.
fn check_t34(b: &mut Bench, params: &VerifyParams, out: &mut Vec<Check>) -> Result<()> {
    let (t, f) = b.require_t_above_f()?;
    let ctx = b.ctx.clone();
    let t_prime = match &params.t_prime {
        Some(s) => match resolve_parameter(s, &Ok(f.clone()), ctx.bits)? {
            Parameter::Finite(v) if v >= f && v <= t => v,
            _ => return Err(Error::Usage("t' must satisfy F <= t' <= t".into())),
        },
        None => f.clone(),
    };
    b.params.insert("t_prime".to_string(), fmt(&t_prime));
    let mu_t = b.mu_t(&t);
    let mu_tp = b.mu_t(&t_prime);
    let mu_f = b.mu_f();
    let s = b.s();
    let c_t = copy(&mu_t).and_then(|m| crate::measures::xi(&m));
    let c_tp = copy(&mu_tp).and_then(|m| crate::measures::xi(&m));
    match (&c_t, &c_tp) {
        (Ok(a), Ok(bb)) => {
            b.params.insert("c_t".to_string(), fmt(a));
            b.params.insert("c_t_prime".to_string(), fmt(bb));
            out.push(bool_check("c_t' >= c_t (positivity of nu_t')", format!(">= {}", fmt(a)), fmt(bb), bb >= a));
        }
        (Err(e), _) | (_, Err(e)) => out.push(Check::error("c_t' >= c_t (positivity of nu_t')", "-", e)),
    }
    let tilde = match (&s, &c_t) {
        (Ok(s), Ok(c)) => Ok(s
            .windows(2)
            .map(|w| Float::with_val(ctx.bits, &w[1] - Float::with_val(ctx.bits, &w[0] * c)))
            .collect::<Vec<_>>()),
        (Err(e), _) | (_, Err(e)) => Err(Error::Inconclusive(e.to_string())),
    };
    let nu = |m: &Result<DiscreteMeasure>| -> Result<DiscreteMeasure> {
        let c = copy(&c_t)?;
        shift_weight(&copy(m)?, &c)
    };
    let nu_tp = nu(&mu_tp);
    let nu_t = nu(&mu_t);
    moment_checks(out, "nu_t' = (x - c_t) dmu_t'", &nu_tp, &tilde, 0..MOMENT_DEGREES);
    moment_checks(out, "nu_t = (x - c_t) dmu_t", &nu_t, &tilde, 0..MOMENT_DEGREES);
    out.push(verdict_check(
        "nu_t is indeterminate and indet(S)",
        Determinacy::Indeterminate,
        Some(StieltjesClass::IndetS),
        classify_result(copy(&nu_t), &ctx),
    ));
    out.push(verdict_check(
        "x^-1 dnu_t is determinate (nu_t is the Friedrichs solution)",
        Determinacy::Determinate,
        None,
        classify_result(inverse_x(&nu_t), &ctx),
    ));
    let xi1 = copy(&mu_f).and_then(|m| crate::measures::xi(&m));
    let at_f = xi1.and_then(|x| shift_weight(&copy(&mu_f)?, &x));
    out.push(verdict_check(
        "(x - xi_1) dmu_F is determinate",
        Determinacy::Determinate,
        None,
        classify_result(at_f, &ctx),
    ));
    Ok(())
}

/// (1+x²)^-1/2 dμ_F determinate; (1+x²)^-1/2 dμ_t indet(S);
/// (1+x²)^-1/2 dμ_K indeterminate and det(S).
fn check_t35(b: &mut Bench, out: &mut Vec<Check>) {
    let ctx = b.ctx.clone();
    let h = DensitySpec::InvOnePlusX2Pow { alpha: 0.5 };
    let mu_f = b.mu_f();
    let mu_k = b.mu_k();
    let mu_t = b.t().and_then(|t| b.mu_t(&t));
    out.push(verdict_check(
        "(1+x^2)^-1/2 dmu_F is determinate",
        Determinacy::Determinate,
        None,
        classify_result(weighted(&mu_f, &h), &ctx),
    ));
    out.push(verdict_check(
        "(1+x^2)^-1/2 dmu_t is indeterminate and indet(S)",
        Determinacy::Indeterminate,
        Some(StieltjesClass::IndetS),
        classify_result(weighted(&mu_t, &h), &ctx),
    ));
    out.push(verdict_check(
        "(1+x^2)^-1/2 dmu_K is indeterminate and det(S)",
        Determinacy::Indeterminate,
        Some(StieltjesClass::DetS),
        classify_result(weighted(&mu_k, &h), &ctx),
    ));
}

/// σ = (1+x²)^-1/2 dμ_t (normalized) is the Friedrichs solution of its own
/// moment problem: its smallest atom is a zero of B_σ + F_σ D_σ, and every
/// other N-extremal solution starts below it.
fn check_t36(b: &mut Bench, out: &mut Vec<Check>) -> Result<()> {
    let (t, _) = b.require_t_above_f()?;
    let ctx = b.ctx.clone();
    let loose = ctx.with_tail_tol(ctx.tail_tol.max(1e-10));
    let mu_t = b.mu_t(&t);
    let sigma = weighted(&mu_t, &DensitySpec::InvOnePlusX2Pow { alpha: 0.5 });
    out.push(verdict_check(
        "sigma = (1+x^2)^-1/2 dmu_t is indeterminate",
        Determinacy::Indeterminate,
        None,
        classify_result(copy(&sigma), &ctx),
    ));
    let sigma = match sigma {
        Ok(s) => s,
        Err(e) => {
            out.push(Check::error("recurrence of the normalized sigma problem", "-", &e));
            return Ok(());
        }
    };
    let len = 60
        .min(sigma.max_bounded_degree().unwrap_or(0) / 2)
        .min(sigma.len().saturating_sub(8));
    b.params.insert("sigma_recurrence_len".to_string(), len.to_string());
    let rc = moments(&sigma, 2 * len + 1)
        .and_then(|s| normalize(&s))
        .and_then(|s| recurrence_from_moments(&s, len.saturating_sub(1), &ctx));
    let rc = match rc {
        Ok(rc) => rc,
        Err(e) => {
            out.push(Check::error("recurrence of the normalized sigma problem", "-", &e));
            return Ok(());
        }
    };
    let fs = match friedrichs_parameter(&rc, &loose) {
        Ok(fp) => {
            let ok = fp.converged && !fp.friedrichs.is_infinite();
            out.push(Check::new(
                "sigma problem is indet(S): finite, converged Friedrichs parameter",
                "finite",
                format!("{} (spread {})", fmt_param(&fp.friedrichs), fmt(&fp.spread)),
                None,
                if ok {
                    Outcome::Pass
                } else if fp.converged {
                    Outcome::Fail
                } else {
                    Outcome::Inconclusive
                },
            ));
            match fp.friedrichs {
                Parameter::Finite(v) if ok => v,
                _ => return Ok(()),
            }
        }
        Err(e) => {
            out.push(Check::error("sigma problem is indet(S): finite, converged Friedrichs parameter", "finite", &e));
            return Ok(());
        }
    };
    b.params.insert("F_sigma".to_string(), fmt(&fs));
    let xi = sigma.atoms[0].clone();
    let total = sigma.total_mass();
    match parameter_of_point(&rc, &xi, &loose) {
        Ok(Parameter::Finite(v)) => out.push(rel_check(
            "-B/D at xi(sigma) equals F_sigma (sigma charges its Friedrichs support)",
            &fs,
            &v,
            &Float::new(ctx.bits),
            RECOVERED_TOL,
        )),
        Ok(Parameter::Infinite) => out.push(bool_check("-B/D at xi(sigma) equals F_sigma", fmt(&fs), "inf", false)),
        Err(e) => out.push(Check::error("-B/D at xi(sigma) equals F_sigma", fmt(&fs), &e)),
    }
    let normalized_mass = Float::with_val(ctx.bits, &sigma.masses[0] / &total);
    match mass_at(&rc, &xi, &loose) {
        Ok(m) => out.push(rel_check(
            "rho(xi(sigma)) equals the normalized sigma mass there",
            &normalized_mass,
            &m.mass,
            &Float::new(ctx.bits),
            RECOVERED_TOL,
        )),
        Err(e) => out.push(Check::error("rho(xi(sigma)) equals the normalized sigma mass there", fmt(&normalized_mass), &e)),
    }
    for factor in [1.5f64, 3.0] {
        let tau = Parameter::Finite(Float::with_val(ctx.bits, &fs * factor));
        let desc = format!("smallest support point of mu_tau, tau = {factor} F_sigma, lies below xi(sigma)");
        let g = |x: &Float| nevanlinna_eval(&rc, x, &loose).map(|q| q.denominator(&tau));
        match bracketed_root(g, &ctx.zero(), &xi, &loose) {
            Ok(r) => out.push(bool_check(desc, format!("< {}", fmt(&xi)), fmt(&r), r < xi)),
            Err(Error::InvalidBracket(_)) => out.push(bool_check(desc, format!("< {}", fmt(&xi)), "no zero in [0, xi(sigma)]", false)),
            Err(e) => out.push(Check::error(desc, format!("< {}", fmt(&xi)), &e)),
        }
    }
    Ok(())
}

/// Supports of μ_F, μ_t, μ_K interlace; each atom x0 of μ_t has
/// -B(x0)/D(x0) = t; the scanned zero sets match the constructed atoms;
/// removing one atom leaves a determinate measure.
fn check_p16(b: &mut Bench, out: &mut Vec<Check>) {
    let ctx = b.ctx.clone();
    let mu_f = b.mu_f();
    let mu_k = b.mu_k();
    let t = b.t();
    let mu_t = copy(&t).and_then(|t| b.mu_t(&t));
    let f = b.f();
    let pairs = [("mu_F", "mu_t", &mu_f, &mu_t), ("mu_F", "mu_K", &mu_f, &mu_k), ("mu_t", "mu_K", &mu_t, &mu_k)];
    for (na, nb, a, bm) in pairs {
        let desc = format!("supports of {na} and {nb} are disjoint and interlace");
        match (a, bm) {
            (Ok(a), Ok(bm)) => {
                let ok = interlaces(&a.atoms, &bm.atoms);
                out.push(bool_check(desc, "interlacing", if ok { "interlacing" } else { "not interlacing" }, ok));
            }
            (Err(e), _) | (_, Err(e)) => out.push(Check::error(desc, "interlacing", e)),
        }
    }
    let rc = b.rc();
    let points = [("mu_t", &mu_t, t.as_ref().ok().map(|v| Parameter::Finite(v.clone()))), ("mu_F", &mu_f, f.as_ref().ok().map(|v| Parameter::Finite(v.clone()))), ("mu_K", &mu_k, Some(Parameter::Infinite))];
    for (name, m, param) in points {
        let (m, param, rc) = match (m, param, &rc) {
            (Ok(m), Some(p), Ok(rc)) => (m, p, rc),
            (Err(e), _, _) | (_, _, Err(e)) => {
                out.push(Check::error(format!("-B/D on the atoms of {name}"), "-", e));
                continue;
            }
            (_, None, _) => {
                out.push(Check::error(format!("-B/D on the atoms of {name}"), "-", &Error::Inconclusive("parameter unavailable".into())));
                continue;
            }
        };
        for (i, x) in m.atoms.iter().take(8).enumerate() {
            let desc = format!("-B/D at atom {} of {name}", i + 1);
            match (parameter_of_point(rc, x, &ctx), &param) {
                (Ok(Parameter::Finite(v)), Parameter::Finite(p)) => {
                    let err = Float::with_val(ctx.bits, &v - p).abs();
                    let tol = 1e-8;
                    out.push(Check::new(desc, fmt(p), format!("{} (abs. error {:.3e})", fmt(&v), err.to_f64()), Some(tol), if err <= tol { Outcome::Pass } else { Outcome::Fail }));
                }
                (Ok(Parameter::Infinite), Parameter::Infinite) => out.push(bool_check(desc, "inf", "inf (D vanishes)", true)),
                (Ok(v), p) => out.push(bool_check(desc, fmt_param(p), fmt_param(&v), false)),
                (Err(e), p) => out.push(Check::error(desc, fmt_param(p), &e)),
            }
        }
    }
    if let (Ok(rc), Ok(f)) = (&rc, &f) {
        let window = b.family.scan_window(10, &ctx);
        for (name, param, m) in [("mu_F", Parameter::Finite(f.clone()), &mu_f), ("mu_K", Parameter::Infinite, &mu_k)] {
            let desc = format!("zeros of B + tD reproduce the first 8 atoms of {name}");
            match (nextremal_support(rc, &param, &window, &ctx), m) {
                (Ok(scan), Ok(m)) => {
                    let n = 8.min(m.len());
                    let mut worst = 0f64;
                    let mut ok = scan.atoms.len() >= n;
                    for (a, x) in scan.atoms.iter().zip(&m.atoms).take(n) {
                        let scale = x.to_f64().abs().max(1.0);
                        let e = Float::with_val(ctx.bits, a - x).abs().to_f64() / scale;
                        worst = worst.max(e);
                        ok &= e <= 1e-8;
                    }
                    let outcome = if ok {
                        Outcome::Pass
                    } else if scan.atoms.len() < n && !scan.inconclusive.is_empty() {
                        Outcome::Inconclusive
                    } else {
                        Outcome::Fail
                    };
                    out.push(Check::new(desc, "max rel. deviation <= 1e-8", format!("{} zeros found, max rel. deviation {worst:.3e}", scan.atoms.len()), Some(1e-8), outcome));
                }
                (Err(e), _) => out.push(Check::error(desc, "-", &e)),
                (_, Err(e)) => out.push(Check::error(desc, "-", e)),
            }
        }
    }
    let reduced = copy(&mu_f).and_then(|m| {
        DiscreteMeasure::new(m.atoms[1..].to_vec(), m.masses[1..].to_vec(), "mu_F without its first atom")
            .map(|r| r.with_tails(m.tail_mass_bound.clone(), m.tail_moment_bounds.clone()))
    });
    out.push(verdict_check(
        "mu_F minus its mass at xi_1 is determinate",
        Determinacy::Determinate,
        None,
        classify_result(reduced, &ctx),
    ));
}

/// ∫ dμ_t / x = t.
fn check_e110(b: &mut Bench, out: &mut Vec<Check>) {
    let t = b.t();
    let f = b.f();
    let mu_t = copy(&t).and_then(|t| b.mu_t(&t));
    let mu_f = b.mu_f();
    for (name, m, expected) in [("mu_t", &mu_t, &t), ("mu_F", &mu_f, &f)] {
        let desc = format!("sum of m/x over {name}");
        match (inverse_x(m).and_then(|m| moment(&m, 0)), expected) {
            (Ok(v), Ok(e)) => out.push(rel_check(desc, e, &v.value, &v.tail_bound, TRANSFORM_TOL)),
            (Err(e), _) => out.push(Check::error(desc, "-", &e)),
            (_, Err(e)) => out.push(Check::error(desc, "-", e)),
        }
    }
}

/// The k-th zero of p_n approaches ξ_k as n grows.
fn check_p32i(b: &mut Bench, out: &mut Vec<Check>) {
    let ctx = b.ctx.clone();
    let mu_f = b.mu_f();
    let degrees = [5usize, 10, 20, 40];
    let rc = b.family.recurrence(degrees[3] + 1, &ctx);
    let (rc, mu_f) = match (rc, mu_f) {
        (Ok(rc), Ok(m)) => (rc, m),
        (Err(e), _) | (_, Err(e)) => {
            out.push(Check::error("zeros of p_n approach the support of mu_F", "-", &e));
            return;
        }
    };
    for k in 0..2usize {
        let xi = &mu_f.atoms[k];
        let zeros: Result<Vec<Float>> = degrees
            .iter()
            .map(|&n| polynomial_zeros(&rc, n, &ctx).map(|z| z[k].clone()))
            .collect();
        let zeros = match zeros {
            Ok(z) => z,
            Err(e) => {
                out.push(Check::error(format!("zero {} of p_n approaches xi_{}", k + 1, k + 1), fmt(xi), &e));
                continue;
            }
        };
        let gaps: Vec<f64> = zeros.iter().map(|z| Float::with_val(ctx.bits, z - xi).abs().to_f64()).collect();
        let listed: Vec<String> = zeros.iter().map(|z| z.to_string_radix(10, Some(15))).collect();
        let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
        out.push(bool_check(
            format!("|x_(n,{}) - xi_{}| decreases for n = 5, 10, 20, 40", k + 1, k + 1),
            "decreasing gaps",
            format!("zeros [{}]", listed.join(", ")),
            shrinking,
        ));
        let above = zeros.iter().all(|z| z > xi);
        out.push(bool_check(
            format!("x_(n,{}) > xi_{} (approach from above)", k + 1, k + 1),
            format!("> {}", fmt(xi)),
            format!("zeros [{}]", listed.join(", ")),
            above,
        ));
        let rel = gaps[3] / xi.to_f64().abs();
        out.push(Check::new(
            format!("x_(40,{}) within 1e-4 (relative) of xi_{}", k + 1, k + 1),
            fmt(xi),
            format!("{} (rel. gap {rel:.3e})", fmt(&zeros[3])),
            Some(1e-4),
            // A gap that is still shrinking monotonically is slow convergence,
            // not a counterexample.
            if rel <= 1e-4 {
                Outcome::Pass
            } else if shrinking && above {
                Outcome::Inconclusive
            } else {
                Outcome::Fail
            },
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_theorem_is_a_usage_error() {
        let r = verify("T9.9", &FamilyHandle::StieltjesWigert { q: 0.5 }, &VerifyParams::default(), &PrecisionContext::default());
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn overall_outcome() {
        let c = |o| Check::new("d", "e", "o", None, o);
        assert_eq!(VerificationReport::summarize(&[c(Outcome::Pass), c(Outcome::Pass)]), Outcome::Pass);
        assert_eq!(VerificationReport::summarize(&[c(Outcome::Pass), c(Outcome::Inconclusive)]), Outcome::Inconclusive);
        assert_eq!(VerificationReport::summarize(&[c(Outcome::Inconclusive), c(Outcome::Fail)]), Outcome::Fail);
        assert_eq!(VerificationReport::summarize(&[]), Outcome::Inconclusive);
    }

    #[test]
    fn relative_check_respects_slack() {
        let p = 128;
        let e = Float::with_val(p, 1);
        let o = Float::with_val(p, 1.0 + 1e-14);
        let zero = Float::new(p);
        assert_eq!(rel_check("x", &e, &o, &zero, 1e-12).outcome, Outcome::Pass);
        assert_eq!(rel_check("x", &e, &o, &Float::with_val(p, 1e-9), 1e-12).outcome, Outcome::Inconclusive);
        let far = Float::with_val(p, 1.1);
        assert_eq!(rel_check("x", &e, &far, &Float::with_val(p, 1e-9), 1e-12).outcome, Outcome::Fail);
    }
}
