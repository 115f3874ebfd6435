//! Riemann zeta function on the real line.
//!
//! Euler–Maclaurin summation for s ≥ 0, the reflection formula below zero.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// B₂ₖ / (2k)! for k = 1..=10.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

const EM_CUTOFF: u32 = 12;

/// ζ(s) for s > 1.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || s.is_nan() {
        return Err(Error::domain(format!("zeta(s) needs s > 1, got {s}")));
    }
    Ok(zeta_real(s))
}

/// Σ_{n ≥ start} n^{-s}, the Hurwitz zeta ζ(s, start), for s > 1 and start ≥ 1.
pub fn zeta_tail(s: f64, start: u64) -> f64 {
    debug_assert!(s > 1.0 && start >= 1);
    if start < u64::from(EM_CUTOFF) {
        let head: f64 = (start..u64::from(EM_CUTOFF)).map(|n| (n as f64).powf(-s)).sum();
        return head + euler_maclaurin_tail(s, f64::from(EM_CUTOFF));
    }
    euler_maclaurin_tail(s, start as f64)
}

/// Σ_{n ≥ N} n^{-s} by Euler–Maclaurin; valid for any s ≠ 1 once N is large
/// against |s|.
fn euler_maclaurin_tail(s: f64, n: f64) -> f64 {
    let n_pow = n.powf(-s);
    let mut total = n * n_pow / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}
    let mut factor = s * n_pow / n;
    let inv_n2 = 1.0 / (n * n);
    for (k, &coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coef * factor;
        total += term;
        if term.abs() < 1e-18 * total.abs() {
            break;
        }
        let k = k as f64;
        factor *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0) * inv_n2;
    }
    total
}

/// ζ(s) for every real s ≠ 1. Used for the expansion coefficients of the Bose
/// functions, which need ζ at negative arguments.
pub(crate) fn zeta_real(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s >= 0.0 {
        let head: f64 = (1..EM_CUTOFF).map(|n| f64::from(n).powf(-s)).sum();
        return head + euler_maclaurin_tail(s, f64::from(EM_CUTOFF));
    }
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return 0.0;
    }
    let one_minus = 1.0 - s;
    2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma(one_minus) * zeta_real(one_minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn closed_forms() {
        assert!(close(zeta(2.0).unwrap(), PI * PI / 6.0, 1e-15));
        assert!(close(zeta(4.0).unwrap(), PI.powi(4) / 90.0, 1e-15));
        assert!(close(zeta(6.0).unwrap(), PI.powi(6) / 945.0, 1e-15));
    }

    #[test]
    fn zeta_three_against_partial_sums() {
        // Σ_{n<=N} n^-3 plus the integral bounds on the remainder
        let n_max = 200_000u64;
        let partial: f64 = (1..=n_max).rev().map(|n| (n as f64).powi(-3)).sum();
        let lower = partial + 0.5 / ((n_max + 1) as f64).powi(2);
        let upper = partial + 0.5 / (n_max as f64).powi(2);
        let z3 = zeta(3.0).unwrap();
        assert!(z3 >= lower - 1e-15 && z3 <= upper + 1e-15);
        assert!(close(z3, 1.202_056_903_159_594_3, 1e-15));
    }

    #[test]
    fn values_below_one() {
        assert!(close(zeta_real(0.0), -0.5, 1e-15));
        assert!(close(zeta_real(0.5), -1.460_354_508_809_586_8, 1e-14));
        assert!(close(zeta_real(-1.0), -1.0 / 12.0, 1e-14));
        assert!(close(zeta_real(-0.5), -0.207_886_224_977_354_57, 1e-13));
        assert!(close(zeta_real(-1.5), -0.025_485_201_889_833_036, 1e-13));
        assert!(close(zeta_real(-3.0), 1.0 / 120.0, 1e-13));
        assert_eq!(zeta_real(-4.0), 0.0);
    }

    #[test]
    fn tail_matches_difference() {
        let s = 2.5;
        let direct = zeta(s).unwrap() - (1..100u64).map(|n| (n as f64).powf(-s)).sum::<f64>();
        assert!(close(zeta_tail(s, 100), direct, 1e-11));
        assert!(close(zeta_tail(s, 1), zeta(s).unwrap(), 1e-15));
    }

    #[test]
    fn domain() {
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
        assert!(zeta(f64::NAN).is_err());
    }
}
