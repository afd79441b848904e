//! Family constructors checked against independent closed forms.

use nextremal::families::*;
use nextremal::measures::moments;
use nextremal::moments::eval_pq_real;
use nextremal::qcalc::QParameter;
use nextremal::PrecisionContext;
use rug::ops::Pow;
use rug::Float;

fn rel(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec(), a - b).abs();
    (d / Float::with_val(a.prec(), b.abs_ref())).to_f64()
}

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

#[test]
fn sw_recurrence_matches_closed_form() {
    let c = ctx();
    let q = QParameter::from_f64(0.5, &c).unwrap();
    let rc = sw_recurrence(&q, 60, &c).unwrap();
    let qf = Float::with_val(256, 0.5);
    for n in 0..60u32 {
        // a_n = q^{-2n-3/2} √(1 - q^{n+1}),  b_n = q^{-2n-1}(1 + q - q^{n+1})
        let qn1 = Float::with_val(256, (&qf).pow(n + 1));
        let a = Float::with_val(256, (&qf).pow(-(2.0 * n as f64) - 1.5)) * Float::with_val(256, 1 - &qn1).sqrt();
        let b = Float::with_val(256, (&qf).pow(-(2 * n as i32) - 1)) * (Float::with_val(256, 1 + &qf) - &qn1);
        assert!(rel(&rc.a[n as usize], &a) < 1e-60, "a_{n}");
        assert!(rel(&rc.b[n as usize], &b) < 1e-60, "b_{n}");
    }
}

#[test]
fn asc_recurrence_matches_closed_form() {
    let c = ctx();
    let h = FamilyHandle::AlSalamCarlitz { a: 1.5, q: 0.5 };
    let rc = h.recurrence(60, &c).unwrap();
    let qf = Float::with_val(256, 0.5);
    let af = Float::with_val(256, 1.5);
    for n in 0..60u32 {
        // a_n = √(a q^{-2n-1}(1 - q^{n+1})),  b_n = (1 + a) q^{-n} - 1
        let qn1 = Float::with_val(256, (&qf).pow(n + 1));
        let a = (Float::with_val(256, (&qf).pow(-(2 * n as i32) - 1)) * &af * Float::with_val(256, 1 - &qn1)).sqrt();
        let b = Float::with_val(256, 1 + &af) / Float::with_val(256, (&qf).pow(n)) - 1u32;
        assert!(rel(&rc.a[n as usize], &a) < 1e-50, "a_{n}");
        assert!(rel(&rc.b[n as usize], &b) < 1e-50, "b_{n}");
    }
}

#[test]
fn sw_polynomials_match_recurrence() {
    let c = ctx();
    let q = QParameter::from_f64(0.5, &c).unwrap();
    let rc = sw_recurrence(&q, 20, &c).unwrap();
    for x in [0.3, 1.7, 12.0, 250.0] {
        let xf = c.float(x);
        let pq = eval_pq_real(&rc, &xf, 15).unwrap();
        for n in [0usize, 1, 5, 14] {
            let closed = sw_p(n, &xf, &q, &c).unwrap();
            let d = Float::with_val(256, &pq.p[n] - &closed).abs().to_f64();
            assert!(d <= 1e-50 * (1.0 + closed.to_f64().abs()), "p_{n}({x})");
        }
    }
}

#[test]
fn sw_solutions_share_the_moments() {
    let c = ctx();
    let q = QParameter::from_f64(0.5, &c).unwrap();
    for which in [SwSolution::Friedrichs, SwSolution::TOne, SwSolution::Krein] {
        let m = sw_nextremal(which, &q, 30, &c).unwrap();
        let s = moments(&m, 5).unwrap();
        for n in 0..5 {
            let expect = sw_moment(n, &q, &c);
            assert!(rel(&s.values()[n], &expect) < 1e-25, "{which:?} s_{n}");
        }
    }
}

#[test]
fn quartic_solutions_share_the_moments() {
    let c = ctx();
    let f = quartic_friedrichs(40, &c).unwrap();
    let k = quartic_krein(40, &c).unwrap();
    let sf = moments(&f, 6).unwrap();
    let sk = moments(&k, 6).unwrap();
    assert!(rel(&sf.values()[0], &c.one()) < 1e-60);
    for n in 0..6 {
        assert!(rel(&sf.values()[n], &sk.values()[n]) < 1e-50, "s_{n}");
    }
}

#[test]
fn asc_solutions_share_the_moments() {
    let c = ctx();
    let q = QParameter::from_f64(0.5, &c).unwrap();
    let a = c.float(1.5);
    let f = asc_friedrichs(&a, &q, 120, &c).unwrap();
    let k = asc_krein(&a, &q, 120, &c).unwrap();
    let sf = moments(&f, 10).unwrap();
    let sk = moments(&k, 10).unwrap();
    assert!(rel(&sf.values()[0], &c.one()) < 1e-60);
    for n in 0..10 {
        assert!(rel(&sf.values()[n], &sk.values()[n]) < 1e-50, "s_{n}");
    }
}

#[test]
fn friedrichs_values() {
    let c = ctx();
    let sw = FamilyHandle::StieltjesWigert { q: 0.5 }.friedrichs_value(&c).unwrap();
    assert!(rel(&sw, &c.parse("0.7112119049133975787").unwrap()) < 1e-18);
    let asc = FamilyHandle::AlSalamCarlitz { a: 1.5, q: 0.5 }.friedrichs_value(&c).unwrap();
    assert!(rel(&asc, &c.parse("1.182592052331139441871683").unwrap()) < 1e-24);
    // F = ∫ x^-1 dμ_F: the series route must agree with a direct sum over atoms.
    let qf = FamilyHandle::Quartic.friedrichs_value(&c).unwrap();
    let m = quartic_friedrichs(60, &c).unwrap();
    let direct = m
        .atoms
        .iter()
        .zip(&m.masses)
        .fold(c.zero(), |acc, (x, w)| acc + Float::with_val(256, w / x));
    assert!(rel(&qf, &direct) < 1e-28);
}
