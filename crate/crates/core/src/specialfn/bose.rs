//! Bose–Einstein functions g_ν(z) = Σ_{j≥1} z^j / j^ν on 0 ≤ z ≤ 1.
//!
//! Two evaluation routes:
//!
//! * the defining series for z ≤ 1/2, stopped on a geometric tail bound;
//! * for z > 1/2, the expansion in x = −ln z around z = 1,
//!   g_ν(e^{−x}) = Γ(1−ν) x^{ν−1} + Σ_k ζ(ν−k) (−x)^k / k!,
//!   with the logarithmic form for integer ν. The series converges for
//!   x < 2π, so at x < ln 2 it needs about twenty terms.
//!
//! Expansion coefficients are memoised per order behind a read-mostly lock.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, OnceLock, RwLock};

use statrs::function::gamma::gamma;

use super::zeta::zeta_real;
use crate::error::{Error, Result};

/// Closest approach to z = 1 allowed for orders ν ≤ 1, where g_ν diverges.
pub const DIVERGENT_ORDER_GUARD: f64 = 1e-9;

const EXPANSION_TERMS: usize = 48;
const NEAR_INTEGER: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAccuracy {
    pub target_rel_error: f64,
    pub max_terms: usize,
}

impl SeriesAccuracy {
    /// Machine-precision setting used inside the solvers.
    pub const TIGHT: SeriesAccuracy = SeriesAccuracy {
        target_rel_error: 1e-16,
        max_terms: 10_000_000,
    };

    pub fn new(target_rel_error: f64, max_terms: usize) -> Result<Self> {
        if !(target_rel_error > 0.0 && target_rel_error < 1e-3) {
            return Err(Error::domain(format!(
                "target relative error must lie in (0, 1e-3), got {target_rel_error}"
            )));
        }
        if max_terms < 10 {
            return Err(Error::domain(format!("max_terms must be >= 10, got {max_terms}")));
        }
        Ok(SeriesAccuracy {
            target_rel_error,
            max_terms,
        })
    }
}

impl Default for SeriesAccuracy {
    fn default() -> Self {
        SeriesAccuracy {
            target_rel_error: 1e-10,
            max_terms: 10_000_000,
        }
    }
}

#[derive(Debug)]
enum Expansion {
    /// Γ(1−ν) and a_k = ζ(ν−k)(−1)^k/k!
    Fractional { gamma: f64, coefs: Vec<f64> },
    /// The (−x)^{n−1}/(n−1)! (H_{n−1} − ln x) term is carried by `log_coef`;
    /// `coefs[n-1]` is zero.
    Integer {
        n: usize,
        log_coef: f64,
        harmonic: f64,
        coefs: Vec<f64>,
    },
}

fn expansion(nu: f64) -> Arc<Expansion> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Expansion>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = nu.to_bits();
    if let Some(found) = cache.read().expect("expansion cache poisoned").get(&key) {
        return Arc::clone(found);
    }
    let built = Arc::new(build_expansion(nu));
    cache
        .write()
        .expect("expansion cache poisoned")
        .entry(key)
        .or_insert(built)
        .clone()
}

fn build_expansion(nu: f64) -> Expansion {
    let mut coefs = Vec::with_capacity(EXPANSION_TERMS);
    let mut factorial = 1.0;
    if nu.fract() == 0.0 {
        let n = nu as usize;
        for k in 0..EXPANSION_TERMS {
            if k > 0 {
                factorial *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coefs.push(if k + 1 == n {
                0.0
            } else {
                sign * zeta_real(nu - k as f64) / factorial
            });
        }
        let mut log_factorial = 1.0;
        for j in 1..n {
            log_factorial *= j as f64;
        }
        let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        let harmonic = (1..n).map(|j| 1.0 / j as f64).sum();
        Expansion::Integer {
            n,
            log_coef: sign / log_factorial,
            harmonic,
            coefs,
        }
    } else {
        for k in 0..EXPANSION_TERMS {
            if k > 0 {
                factorial *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coefs.push(sign * zeta_real(nu - k as f64) / factorial);
        }
        Expansion::Fractional {
            gamma: gamma(1.0 - nu),
            coefs,
        }
    }
}

fn power_series(coefs: &[f64], x: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut quiet = 0;
    for &c in coefs {
        let term = c * power;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        power *= x;
    }
    Err(Error::Convergence(format!(
        "expansion about z = 1 did not settle at x = {x}"
    )))
}

fn near_unity(nu: f64, x: f64) -> Result<f64> {
    match &*expansion(nu) {
        Expansion::Fractional { gamma, coefs } => {
            let singular = if x == 0.0 { 0.0 } else { gamma * x.powf(nu - 1.0) };
            Ok(singular + power_series(coefs, x)?)
        }
        Expansion::Integer {
            n,
            log_coef,
            harmonic,
            coefs,
        } => {
            let log_part = if x == 0.0 {
                0.0
            } else {
                log_coef * x.powi(*n as i32 - 1) * (harmonic - x.ln())
            };
            Ok(log_part + power_series(coefs, x)?)
        }
    }
}

/// Defining series at fugacity z < 1, stopped once the geometric bound on the
/// remainder, z^{J+1}(J+1)^{−ν}/(1−z), drops below the target.
fn direct_series(nu: f64, z: f64, acc: &SeriesAccuracy) -> Result<f64> {
    let mut sum = 0.0;
    let mut zj = 1.0;
    let inv_one_minus = 1.0 / (1.0 - z);
    for j in 1..=acc.max_terms {
        zj *= z;
        let jf = j as f64;
        sum += zj * jf.powf(-nu);
        let next = zj * z * (jf + 1.0).powf(-nu);
        if next * inv_one_minus <= acc.target_rel_error * sum {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "g_{nu}({z}) needs more than {} terms",
        acc.max_terms
    )))
}

fn check_order(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("order nu must be positive, got {nu}")))
    }
}

/// g_ν(z) for 0 ≤ z ≤ 1.
pub fn bose_function(nu: f64, z: f64, acc: &SeriesAccuracy) -> Result<f64> {
    check_order(nu)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("fugacity must lie in [0, 1], got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z <= 0.5 {
        return direct_series(nu, z, acc);
    }
    bose_function_log(nu, -(z - 1.0).ln_1p(), acc)
}

/// g_ν(e^{−x}) for x ≥ 0. Working in x keeps full precision close to z = 1.
pub fn bose_function_log(nu: f64, x: f64, acc: &SeriesAccuracy) -> Result<f64> {
    check_order(nu)?;
    if !(x >= 0.0) {
        return Err(Error::domain(format!("log-fugacity -ln z must be >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if nu <= 1.0 {
        if x == 0.0 {
            return Err(Error::domain(format!("g_{nu}(1) diverges")));
        }
        if -(-x).exp_m1() < DIVERGENT_ORDER_GUARD {
            return Err(Error::domain(format!(
                "g_{nu}(z) refused within {DIVERGENT_ORDER_GUARD:e} of z = 1"
            )));
        }
    }
    if x >= LN_2 {
        return direct_series(nu, (-x).exp(), acc);
    }
    let distance = (nu - nu.round()).abs();
    if distance > 0.0 && distance < NEAR_INTEGER {
        if x == 0.0 {
            return Ok(zeta_real(nu));
        }
        return direct_series(nu, (-x).exp(), acc);
    }
    near_unity(nu, x)
}

/// u·g_{1/2}(e^{−u²}). Finite at u = 0, where it tends to √π; the density
/// solver needs it at the trap centre on the critical isotherm.
pub fn scaled_half_order(u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::domain(format!("u must be >= 0, got {u}")));
    }
    let x = u * u;
    if x >= LN_2 {
        return Ok(u * direct_series(0.5, (-x).exp(), &SeriesAccuracy::TIGHT)?);
    }
    match &*expansion(0.5) {
        Expansion::Fractional { coefs, .. } => Ok(PI.sqrt() + u * power_series(coefs, x)?),
        Expansion::Integer { .. } => unreachable!("order 1/2 is fractional"),
    }
}

/// g_ν(z) from (1/Γ(ν)) ∫₀^∞ x^{ν−1} / (z⁻¹eˣ − 1) dx, by adaptive quadrature
/// after the substitution x = u². Independent of the series routes above.
pub fn bose_function_integral(nu: f64, z: f64, rel_tol: f64) -> Result<f64> {
    check_order(nu)?;
    if !(0.0..=1.0).contains(&z) || (z == 1.0 && nu <= 1.0) {
        return Err(Error::domain(format!("g_{nu}({z}) outside the convergent domain")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let one_minus_z = 1.0 - z;
    // Kronrod nodes never touch the endpoints, so u = 0 is not evaluated.
    let integrand = |u: f64| 2.0 * u.powf(2.0 * nu - 1.0) * z / ((u * u).exp_m1() + one_minus_z);
    let upper = (60.0 + 4.0 * nu).sqrt();
    let opts = crate::quadrature::QuadOptions {
        abs_tol: 0.0,
        rel_tol,
        max_intervals: 4000,
    };
    let integral = crate::quadrature::integrate(integrand, 0.0, upper, opts)?;
    Ok(integral.value / gamma(nu))
}
