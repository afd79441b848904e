//! Acceptance run: one PASS/FAIL line per criterion, at the stated tolerance.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process exits non-zero when a criterion fails, except for the entries in
//! `KNOWN_UNATTAINABLE`, whose literal statement is false; they are printed
//! as FAIL with the analysis and do not fail the run.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

use nextremal::families::*;
use nextremal::measures::{
    apply_density, classify_measure, density_index, moment, moments, translate, DensityIndex, DensitySpec,
    DiscreteMeasure,
};
use nextremal::moments::{
    eval_pq_real, hankel_positive_definite, moments_from_recurrence, smallest_polynomial_zero, MomentSequence,
    RecurrenceCoefficients,
};
use nextremal::nevanlinna::{
    friedrichs_parameter, interlaces, mass_at, nevanlinna_eval, nextremal_support, parameter_of_point, Determinacy,
    Parameter,
};
use nextremal::numerics::{quadrature, Complex, Interval, Scalar};
use nextremal::qcalc::{phi_zeros, QParameter};
use nextremal::{PrecisionContext, Result};

/// Criteria whose literal statement cannot hold; see the printed analysis.
const KNOWN_UNATTAINABLE: &[u32] = &[13];

type Criterion = fn() -> Result<Verdict>;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn rel(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if b.is_zero() {
        d.to_f64()
    } else {
        (d / Float::with_val(b.prec(), b.abs_ref())).to_f64()
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn q_half(c: &PrecisionContext) -> QParameter {
    QParameter::from_f64(0.5, c).unwrap()
}

fn sw() -> FamilyHandle {
    FamilyHandle::StieltjesWigert { q: 0.5 }
}

fn sw_rc(c: &PrecisionContext) -> Result<RecurrenceCoefficients> {
    let h = sw();
    h.recurrence(h.default_recurrence_len(c), c)
}

/// 1 - Π_{k>=1} (1 - 2^-k), summed here without the q-calculus module.
fn sw_f_oracle(c: &PrecisionContext) -> Float {
    let mut prod = c.one();
    for k in 1..=c.bits + 8 {
        prod *= Float::with_val(c.bits, 1 - Float::with_val(c.bits, Float::i_exp(1, -(k as i32))));
    }
    c.one() - prod
}

/// F = (q;q)_∞ Σ q^k / ((a - q^k)(q;q)_k), summed directly.
fn asc_f_oracle(a: f64, q: f64, c: &PrecisionContext) -> Float {
    let p = c.bits;
    let (a, q) = (c.float(a), c.float(q));
    let mut qq_inf = c.one();
    let mut qk = q.clone();
    for _ in 0..2 * p {
        qq_inf *= Float::with_val(p, 1 - &qk);
        qk *= &q;
    }
    let mut sum = c.zero();
    let mut qq_k = c.one();
    let mut qk = c.one();
    for k in 0..2 * p {
        if k > 0 {
            qk *= &q;
            qq_k *= Float::with_val(p, 1 - &qk);
        }
        sum += Float::with_val(p, &qk / Float::with_val(p, Float::with_val(p, &a - &qk) * &qq_k));
    }
    qq_inf * sum
}

fn max_rel_moments(x: &MomentSequence, y: &MomentSequence, n: usize) -> f64 {
    (0..n).map(|k| rel(&x.values()[k], &y.values()[k])).fold(0.0, f64::max)
}

// ------------------------------------------------------------------ criteria

fn c1() -> Result<Verdict> {
    let c = ctx();
    let t = Instant::now();
    let f = quartic_friedrichs(40, &c)?;
    let k = quartic_krein(40, &c)?;
    let quartic = max_rel_moments(&moments(&f, 9)?, &moments(&k, 9)?, 9);
    let t_quartic = t.elapsed();
    let t = Instant::now();
    let q = q_half(&c);
    let a = c.float(1.5);
    let f = asc_friedrichs(&a, &q, 40, &c)?;
    let k = asc_krein(&a, &q, 40, &c)?;
    let asc = max_rel_moments(&moments(&f, 7)?, &moments(&k, 7)?, 7);
    let t_asc = t.elapsed();
    let limit = Duration::from_secs(5);
    verdict(
        quartic <= 1e-12 && asc <= 1e-12 && t_quartic < limit && t_asc < limit,
        format!(
            "quartic n<=8 max rel {quartic:.2e} ({}), ASC(1.5,0.5) n<=6 max rel {asc:.2e} ({}); tol 1e-12, < 5s",
            secs(t_quartic),
            secs(t_asc)
        ),
    )
}

fn c2() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let a = c.float(1.5);
    let ms = [
        quartic_friedrichs(40, &c)?,
        quartic_krein(40, &c)?,
        asc_friedrichs(&a, &q, 40, &c)?,
        asc_krein(&a, &q, 40, &c)?,
    ];
    let worst = ms
        .iter()
        .map(|m| Float::with_val(c.bits, m.total_mass() - 1u32).abs().to_f64())
        .fold(0.0, f64::max);
    verdict(worst <= 1e-12, format!("max |total mass - 1| = {worst:.2e} over quartic and ASC mu_F, mu_K; tol 1e-12"))
}

fn c3() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let qc = c.with_tail_tol(1e-20);
    let mut worst_quad = 0f64;
    let mut all_converged = true;
    for n in 0..=6u32 {
        let r = quadrature(
            |x| {
                let v = sw_density(x, &q, &qc).expect("density defined on x > 0");
                v * Float::with_val(qc.bits, x.pow(n))
            },
            &Interval::HalfLine(qc.zero()),
            &qc,
        );
        all_converged &= r.converged;
        // q^{-n(n+1)/2} = 2^{n(n+1)/2}
        let expect = Float::with_val(c.bits, Float::i_exp(1, (n * (n + 1) / 2) as i32));
        worst_quad = worst_quad.max(rel(&r.value, &expect));
    }
    let rc = sw_recurrence(&q, 8, &c)?;
    let back = moments_from_recurrence(&rc, 13)?;
    let worst_rt = (0..13u32)
        .map(|n| rel(&back[n as usize], &Float::with_val(c.bits, Float::i_exp(1, (n * (n + 1) / 2) as i32))))
        .fold(0.0, f64::max);
    verdict(
        all_converged && worst_quad <= 1e-10 && worst_rt <= 1e-10,
        format!("quadrature n<=6 max rel {worst_quad:.2e}, recurrence round trip n<=12 max rel {worst_rt:.2e}; tol 1e-10"),
    )
}

fn c4() -> Result<Verdict> {
    let c = ctx();
    let t = Instant::now();
    let fp = friedrichs_parameter(&sw_rc(&c)?, &c)?;
    let sw_err = match &fp.friedrichs {
        Parameter::Finite(f) => Float::with_val(c.bits, f - sw_f_oracle(&c)).abs().to_f64(),
        Parameter::Infinite => f64::INFINITY,
    };
    let t_sw = t.elapsed();
    let t = Instant::now();
    let h = FamilyHandle::AlSalamCarlitz { a: 1.5, q: 0.5 };
    let work = h.working_context(&c);
    let fa = friedrichs_parameter(&h.recurrence(h.default_recurrence_len(&work), &work)?, &work)?;
    let asc_err = match &fa.friedrichs {
        Parameter::Finite(f) => Float::with_val(c.bits, f - asc_f_oracle(1.5, 0.5, &c)).abs().to_f64(),
        Parameter::Infinite => f64::INFINITY,
    };
    let t_asc = t.elapsed();
    let limit = Duration::from_secs(30);
    verdict(
        sw_err <= 1e-8 && asc_err <= 1e-8 && t_sw < limit && t_asc < limit,
        format!(
            "SW q=0.5 |F - (1-(q;q)_inf)| = {sw_err:.2e} ({}), ASC(1.5,0.5) |F - series| = {asc_err:.2e} ({}); tol 1e-8, < 30s",
            secs(t_sw),
            secs(t_asc)
        ),
    )
}

fn c5() -> Result<Verdict> {
    let c = ctx();
    let rc = sw_rc(&c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut worst = 0f64;
    let mut n = 0;
    while n < 10 {
        let r: f64 = rng.gen_range(0.05..=4.0);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        if theta.sin().abs() < 0.05 {
            continue;
        }
        let z = Complex::with_val(c.bits, r * theta.cos(), r * theta.sin());
        let m = nevanlinna_eval(&rc, &z, &c)?;
        let ad_bc = m.a.mul_ref(&m.d).sub_ref(&m.b.mul_ref(&m.c));
        let resid = ad_bc.sub_ref(&Complex::real(&c.one())).abs().to_f64();
        worst = worst.max(resid);
        n += 1;
    }
    verdict(worst <= 1e-12, format!("max |AD - BC - 1| = {worst:.2e} at 10 seeded points, |z| <= 4; tol 1e-12"))
}

struct SwScans {
    f: Vec<Float>,
    one: Vec<Float>,
    krein: Vec<Float>,
}

fn sw_scans(c: &PrecisionContext) -> Result<SwScans> {
    let rc = sw_rc(c)?;
    let window = sw().scan_window(10, c);
    let scan = |t: Parameter| nextremal_support(&rc, &t, &window, c).map(|s| s.atoms);
    Ok(SwScans {
        f: scan(Parameter::Finite(sw_f_oracle(c)))?,
        one: scan(Parameter::Finite(c.one()))?,
        krein: scan(Parameter::Infinite)?,
    })
}

fn c6() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let xi = phi_zeros(&q, 8, &c)?.zeros;
    let s = sw_scans(&c)?;
    let max_dev = |found: &[Float], expect: &[Float]| {
        if found.len() < expect.len() {
            return f64::INFINITY;
        }
        found
            .iter()
            .zip(expect)
            .map(|(a, b)| {
                let d = Float::with_val(c.bits, a - b).abs().to_f64();
                d / b.to_f64().abs().max(1.0)
            })
            .fold(0.0, f64::max)
    };
    let dev_f = max_dev(&s.f, &xi);
    let mut krein_expect = vec![c.zero()];
    krein_expect.extend(xi.iter().take(7).map(|x| Float::with_val(c.bits, x / q.value())));
    let dev_k = max_dev(&s.krein, &krein_expect);
    let il = interlaces(&s.f, &s.one) && interlaces(&s.f, &s.krein) && interlaces(&s.one, &s.krein);
    verdict(
        dev_f <= 1e-8 && dev_k <= 1e-8 && il,
        format!(
            "t=F vs Phi zeros (8) max rel {dev_f:.2e}; t=inf vs {{0}} u xi_k/q (8) max rel {dev_k:.2e}; pairwise interlacing {il}; tol 1e-8"
        ),
    )
}

fn c7() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let rc = sw_rc(&c)?;
    let xi = phi_zeros(&q, 8, &c)?.zeros;
    let f = sw_f_oracle(&c);
    let mut worst = 0f64;
    for (t, points) in [
        (c.one(), xi.iter().map(|x| Float::with_val(c.bits, x * q.value())).collect::<Vec<_>>()),
        (f, xi.clone()),
    ] {
        for x in &points {
            let d = match parameter_of_point(&rc, x, &c)? {
                Parameter::Finite(v) => Float::with_val(c.bits, v - &t).abs().to_f64(),
                Parameter::Infinite => f64::INFINITY,
            };
            worst = worst.max(d);
        }
    }
    verdict(worst <= 1e-8, format!("max |-B/D - t| = {worst:.2e} over 8 atoms of mu_1 and mu_F; tol 1e-8"))
}

fn c8() -> Result<Verdict> {
    let c = ctx();
    let m = sw_nextremal(SwSolution::TOne, &q_half(&c), 30, &c)?;
    let mut s = c.zero();
    for (x, w) in m.atoms.iter().zip(&m.masses) {
        s += Float::with_val(c.bits, w / x);
    }
    let err = Float::with_val(c.bits, &s - 1u32).abs().to_f64();
    verdict(err <= 1e-6, format!("sum m/x over mu_1 (30 atoms) = {}, error {err:.2e}; tol 1e-6", s.to_string_radix(10, Some(20))))
}

fn c9() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let rc = sw_rc(&c)?;
    let mut worst_total = 0f64;
    for which in [SwSolution::Friedrichs, SwSolution::TOne, SwSolution::Krein] {
        let m = sw_nextremal_with(&rc, which, &q, 30, &c)?;
        worst_total = worst_total.max(Float::with_val(c.bits, m.total_mass() - 1u32).abs().to_f64());
    }
    // Quartic: ρ((2k+1)^4) against (4π/K0²)(2k+1)π/sinh((2k+1)π), K0 = Γ(1/4)²/(4√π).
    let h = FamilyHandle::Quartic;
    let work = h.working_context(&c);
    let qrc = h.recurrence(h.default_recurrence_len(&work), &work)?;
    let p = c.bits;
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let k0 = Float::with_val(p, Float::with_val(p, c.float(0.25).gamma()).square()) / (Float::with_val(p, pi.sqrt_ref()) * 4u32);
    let norm = Float::with_val(p, &pi * 4u32) / Float::with_val(p, k0.square_ref());
    let mut worst_quartic = 0f64;
    for k in 0..=5u32 {
        let j = 2 * k + 1;
        let jpi = Float::with_val(p, &pi * j);
        let expect = Float::with_val(p, &norm * &jpi) / Float::with_val(p, jpi.sinh_ref());
        let got = mass_at(&qrc, &c.float(j).pow(4u32), &work)?.mass;
        worst_quartic = worst_quartic.max(rel(&got, &expect));
    }
    verdict(
        worst_total <= 1e-10 && worst_quartic <= 1e-8,
        format!(
            "SW mu_F, mu_1, mu_K total mass max error {worst_total:.2e} (tol 1e-10); quartic mass_at k<=5 max rel {worst_quartic:.2e} (tol 1e-8)"
        ),
    )
}

fn inverse_x(m: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    apply_density(m, &DensitySpec::InverseX { drop_zero_atom: false })
}

fn c10() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let f = classify_measure(&inverse_x(&sw_nextremal(SwSolution::Friedrichs, &q, 64, &c)?)?, &c)?;
    let one = classify_measure(&inverse_x(&sw_nextremal(SwSolution::TOne, &q, 64, &c)?)?, &c)?;
    let ok = f.verdict == Determinacy::Determinate
        && one.verdict == Determinacy::Indeterminate
        && f.evidence.margin >= 10.0
        && one.evidence.margin >= 10.0;
    verdict(
        ok,
        format!(
            "x^-1 mu_F {:?} (ratio {:.3}, margin {:.1}x), x^-1 mu_1 {:?} {} (ratio {:.3}, margin {:.1}x); need >= 10x",
            f.verdict, f.evidence.ratio, f.evidence.margin, one.verdict, one.stieltjes_class, one.evidence.ratio, one.evidence.margin
        ),
    )
}

fn c11() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let mut got = Vec::new();
    for which in [SwSolution::Friedrichs, SwSolution::TOne, SwSolution::Krein] {
        let m = sw_nextremal(which, &q, 64, &c)?;
        got.push(density_index(&m, 4, &c)?.index);
    }
    let expect = [DensityIndex::Exact(1), DensityIndex::Exact(0), DensityIndex::Exact(2)];
    verdict(got == expect, format!("delta(mu_F, mu_1, mu_K) = {got:?}, expected {expect:?}"))
}

fn c12() -> Result<Verdict> {
    let c = ctx();
    let mut parts = Vec::new();
    let mut ok = true;
    for qv in [0.3, 0.5, 0.8] {
        let q = QParameter::from_f64(qv, &c)?;
        let table = phi_zeros(&q, 11, &c)?;
        let bound = 1.0 / (qv * qv);
        let min_ratio = table
            .zeros
            .windows(2)
            .map(|w| Float::with_val(c.bits, &w[1] / &w[0]).to_f64())
            .fold(f64::INFINITY, f64::min);
        ok &= min_ratio > bound && table.separation_violations().is_empty();
        parts.push(format!("q={qv}: min ratio {min_ratio:.9} > {bound:.9}"));
    }
    verdict(ok, format!("{} (first 10 zeros)", parts.join(", ")))
}

fn c13() -> Result<Verdict> {
    let c = ctx();
    let q = q_half(&c);
    let xi1 = phi_zeros(&q, 1, &c)?.zeros[0].clone();
    let rc = sw_recurrence(&q, 41, &c)?;
    let degrees = [5usize, 10, 20, 40];
    let mut zeros = Vec::new();
    let mut sign_changes = true;
    for &n in &degrees {
        let z = smallest_polynomial_zero(&rc, n, &c)?;
        // cross-check against the closed-form polynomial
        let eps = Float::with_val(c.bits, &z * 1e-20);
        let lo = sw_p(n, &Float::with_val(c.bits, &z - &eps), &q, &c)?;
        let hi = sw_p(n, &Float::with_val(c.bits, &z + &eps), &q, &c)?;
        sign_changes &= lo.is_sign_negative() != hi.is_sign_negative();
        zeros.push(z);
    }
    let increasing = zeros.windows(2).all(|w| w[1] > w[0]);
    let decreasing = zeros.windows(2).all(|w| w[1] < w[0]);
    let gap = Float::with_val(c.bits, &zeros[3] - &xi1).abs().to_f64();
    let listed: Vec<String> = zeros.iter().map(|z| z.to_string_radix(10, Some(15))).collect();
    verdict(
        increasing && gap <= 1e-4 && sign_changes,
        format!(
            "smallest zeros n=5,10,20,40: [{}], xi_1 = {}; increasing {increasing}, decreasing {decreasing}; \
             gap at n=40 {gap:.2e} (tol 1e-4, {}); sign change of the closed-form p_n at each zero {sign_changes}. \
             Zeros of p_{{n+1}} interlace those of p_n, so the smallest zero can only move down toward xi_1; \
             'increasing' is unattainable as stated",
            listed.join(", "),
            xi1.to_string_radix(10, Some(15)),
            if gap <= 1e-4 { "met" } else { "not met" }
        ),
    )
}

fn family_moment_sequences(c: &PrecisionContext) -> Result<Vec<(String, MomentSequence)>> {
    let q = q_half(c);
    let a = c.float(1.5);
    let mut out = vec![("SW closed form".to_string(), sw_moments(21, &q, c))];
    for m in [
        quartic_friedrichs(40, c)?,
        quartic_krein(40, c)?,
        asc_friedrichs(&a, &q, 40, c)?,
        asc_krein(&a, &q, 40, c)?,
        sw_nextremal(SwSolution::Friedrichs, &q, 40, c)?,
        sw_nextremal(SwSolution::TOne, &q, 40, c)?,
        sw_nextremal(SwSolution::Krein, &q, 40, c)?,
    ] {
        out.push((m.label.clone(), moments(&m, 21)?));
    }
    Ok(out)
}

fn random_measure(rng: &mut ChaCha8Rng, c: &PrecisionContext) -> DiscreteMeasure {
    let n = rng.gen_range(3..10);
    let mut atoms: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..50.0)).collect();
    atoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    atoms.dedup();
    let masses: Vec<Float> = atoms.iter().map(|_| c.float(rng.gen_range(0.01..1.0))).collect();
    DiscreteMeasure::new(atoms.into_iter().map(|x| c.float(x)).collect(), masses, "random").unwrap()
}

fn c14() -> Result<Verdict> {
    let c = ctx();
    // Hankel positive definiteness, m <= 10.
    let mut pd_fail = Vec::new();
    for (name, s) in family_moment_sequences(&c)? {
        for m in 1..=10 {
            if !hankel_positive_definite(&s, m, &c)? {
                pd_fail.push(format!("{name} m={m}"));
                break;
            }
        }
    }
    // Wronskian a_n(p_{n+1} q_n - p_n q_{n+1}) = -1 at working precision.
    let mut wr_worst = 0f64;
    let rcs = [
        sw_recurrence(&q_half(&c), 32, &c)?,
        FamilyHandle::AlSalamCarlitz { a: 1.5, q: 0.5 }.recurrence(32, &c)?,
        FamilyHandle::Quartic.recurrence(32, &c)?,
    ];
    for rc in &rcs {
        for x in [-2.5, 0.0, 0.75, 3.0, 40.0] {
            let pq = eval_pq_real(rc, &c.float(x), 31)?;
            for n in 0..=30 {
                let l = Float::with_val(c.bits, &pq.p[n + 1] * &pq.q[n]);
                let r = Float::with_val(c.bits, &pq.p[n] * &pq.q[n + 1]);
                let scale = Float::with_val(c.bits, l.abs_ref()) + Float::with_val(c.bits, r.abs_ref());
                let w = Float::with_val(c.bits, &rc.a[n] * Float::with_val(c.bits, &l - &r));
                let err = Float::with_val(c.bits, w + 1u32).abs();
                let units = (err / (Float::with_val(c.bits, &rc.a[n] * &scale) + 1u32) / c.unit_roundoff()).to_f64();
                wr_worst = wr_worst.max(units);
            }
        }
    }
    // translate / apply_density identities on random exact measures.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0014);
    let mut id_worst = 0f64;
    for _ in 0..100 {
        let m = random_measure(&mut rng, &c);
        let a = c.float(rng.gen_range(-5.0..5.0));
        let shifted = translate(&m, &a);
        // ∫ (x + a)^2 dm = s2 + 2a s1 + a² s0
        let s = moments(&m, 3)?;
        let v = s.values();
        let expect = Float::with_val(c.bits, &v[2] + Float::with_val(c.bits, &a * &v[1]) * 2u32)
            + Float::with_val(c.bits, a.square_ref()) * &v[0];
        id_worst = id_worst.max(rel(&moment(&shifted, 2)?.value, &expect));
        let back = translate(&shifted, &Float::with_val(c.bits, -&a));
        for (x, y) in back.atoms.iter().zip(&m.atoms) {
            id_worst = id_worst.max(rel(x, y));
        }
        // x^-1 then x^1 is the identity; x·dm has moments s_{n+1}.
        let round = apply_density(&inverse_x(&m)?, &DensitySpec::XPow { k: 1 })?;
        for (x, y) in round.masses.iter().zip(&m.masses) {
            id_worst = id_worst.max(rel(x, y));
        }
        let xm = apply_density(&m, &DensitySpec::XPow { k: 1 })?;
        id_worst = id_worst.max(rel(&moment(&xm, 1)?.value, &v[2]));
        // (1+x²)^-α then (1+x²)^α is the identity.
        let alpha = rng.gen_range(0.0..1.0);
        let there = apply_density(&m, &DensitySpec::InvOnePlusX2Pow { alpha })?;
        let back = apply_density(&there, &DensitySpec::OnePlusX2Pow { delta: alpha })?;
        for (x, y) in back.masses.iter().zip(&m.masses) {
            id_worst = id_worst.max(rel(x, y));
        }
    }
    let ok = pd_fail.is_empty() && wr_worst <= 1e3 && id_worst <= 1e-60;
    verdict(
        ok,
        format!(
            "Hankel PD m<=10 on 8 family sequences: {}; Wronskian n<=30 max error {wr_worst:.1} units of roundoff; \
             translate/density identities (100 cases) max rel {id_worst:.2e}",
            if pd_fail.is_empty() { "all positive definite".to_string() } else { format!("FAILED {pd_fail:?}") }
        ),
    )
}

fn main() -> ExitCode {
    // libtest passes flags such as --nocapture or a filter; nothing to filter here.
    let criteria: [(u32, &str, Criterion); 14] = [
        (1, "moment agreement across N-extremal solutions", c1),
        (2, "normalization of mu_F and mu_K", c2),
        (3, "Stieltjes-Wigert moments by quadrature and round trip", c3),
        (4, "Friedrichs parameter from the recurrence", c4),
        (5, "Nevanlinna determinant identity", c5),
        (6, "support reconstruction and interlacing", c6),
        (7, "parameter of a support point", c7),
        (8, "sum of m/x over mu_1", c8),
        (9, "masses", c9),
        (10, "classification of x^-1 mu_F and x^-1 mu_1", c10),
        (11, "density index", c11),
        (12, "separation of Phi zeros", c12),
        (13, "smallest zero of p_n approaches xi_1", c13),
        (14, "property suites", c14),
    ];
    let mut unexpected = 0;
    let total = Instant::now();
    for (id, name, f) in criteria {
        let t = Instant::now();
        let (pass, detail) = match f() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let status = match (pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (unattainable as stated)",
            (false, false) => "FAIL",
        };
        if !pass && !known {
            unexpected += 1;
        }
        println!("criterion {id:>2} {status}: {name} [{}] {detail}", secs(t.elapsed()));
        // Stale entry in the table: the criterion now passes.
        if pass && known {
            println!("criterion {id:>2} note: listed as unattainable but passed; update KNOWN_UNATTAINABLE");
            unexpected += 1;
        }
    }
    println!("acceptance: {unexpected} unexpected failure(s) in {}", secs(total.elapsed()));
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
