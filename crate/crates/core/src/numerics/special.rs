//! Special constants and functions (thin wrappers over MPFR).

use rug::float::Constant;
use rug::Float;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn gamma(x: &Float) -> Float {
    Float::with_val(x.prec(), x.gamma_ref())
}

pub fn agm(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec(), a.agm_ref(b))
}

/// Binomial coefficient C(n, k) as an exact float (n, k small).
pub fn binomial(n: u64, k: u64, prec: u32) -> Float {
    let v = rug::Integer::from(rug::Integer::binomial_u(n as u32, k as u32));
    Float::with_val(prec, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn gamma_quarter_matches_agm_identity() {
        let p = 256;
        let g = gamma(&(Float::with_val(p, 1) / 4u32));
        // Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(1, sqrt 2)
        let two_pi = Float::with_val(p, 2) * pi(p);
        let num = Float::with_val(p, two_pi.pow(Float::with_val(p, 1.5)));
        let m = agm(&Float::with_val(p, 1), &Float::with_val(p, 2).sqrt());
        let rhs = num / m;
        let lhs = Float::with_val(p, g.square_ref());
        assert!(Float::with_val(p, &lhs - &rhs).abs() < Float::with_val(p, 1e-70));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3, 64), 120);
        assert_eq!(binomial(5, 0, 64), 1);
    }
}
