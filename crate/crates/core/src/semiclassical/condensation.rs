//! Ideal condensation temperature T_0, the first-order shift ΔT_c/T_0 and a
//! numerical T_c from the self-consistent density.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::number::critical_number;
use super::{FormulaMode, Isotherm, NumericOptions, ZETA_2, ZETA_3, ZETA_3_2};
use crate::error::{Error, Result};
use crate::specialfn::{g_double_sum_detailed, DoubleSumEstimate, SeriesAccuracy};
use crate::units::GasSystem;

/// G_{3/2}(1), computed once to 1e-13 and kept with its truncation record.
pub fn g_double_sum_at_one() -> Result<DoubleSumEstimate> {
    static CACHE: OnceLock<Result<DoubleSumEstimate>> = OnceLock::new();
    CACHE
        .get_or_init(|| g_double_sum_detailed(1.0, &SeriesAccuracy::new(1e-13, 10_000_000)?))
        .clone()
}

/// Θ in ΔT_c/T_0 = −λκ⁻²α^{1/4}(m^{1/2}/(c^{3/2}ħ^{5/2}))·Θ·N^{1/6}.
///
/// Paper-verbatim: (ζ(3)ζ(2) − G)/(3(2π)^{5/4}ζ(3))·(4/(π³ζ(3)))^{1/6}.
/// Derived-consistent: 2^{1/4}(ζ(2)ζ(3/2) − G)/(6(2π)^{3/2}ζ(3)^{7/6}), which
/// is the standard Hartree–Fock shift −1.33·(a/a_ho)·N^{1/6}.
pub fn theta_constant(mode: FormulaMode) -> Result<f64> {
    let g = g_double_sum_at_one()?.value;
    Ok(theta_from(mode, g))
}

pub(crate) fn theta_from(mode: FormulaMode, g: f64) -> f64 {
    match mode {
        FormulaMode::PaperVerbatim => {
            (ZETA_3 * ZETA_2 - g) / (3.0 * (2.0 * PI).powf(1.25) * ZETA_3)
                * (4.0 / (PI.powi(3) * ZETA_3)).powf(1.0 / 6.0)
        }
        FormulaMode::DerivedConsistent => {
            2f64.powf(0.25) * (ZETA_2 * ZETA_3_2 - g) / (6.0 * (2.0 * PI).powf(1.5) * ZETA_3.powf(7.0 / 6.0))
        }
    }
}

/// k_B T_0 = (N√(2α³)/ζ(3))^{1/3} ħc as printed, or ħω₀(N/ζ(3))^{1/3}.
pub fn ideal_condensation_temperature(gas: &GasSystem, mode: FormulaMode) -> f64 {
    let k = gas.constants();
    let n = gas.particle_number();
    let alpha = gas.alpha();
    let kt = match mode {
        FormulaMode::PaperVerbatim => (n * (2.0 * alpha.powi(3)).sqrt() / ZETA_3).cbrt() * k.hbar * k.c,
        FormulaMode::DerivedConsistent => k.hbar * k.c * (2.0 * alpha).sqrt() * (n / ZETA_3).cbrt(),
    };
    kt / k.kb
}

/// ΔT_c/T_0 = −λκ⁻²α^{1/4}(m^{1/2}/(c^{3/2}ħ^{5/2}))·Θ·N^{1/6}.
pub fn condensation_shift(gas: &GasSystem, mode: FormulaMode) -> Result<f64> {
    if gas.lambda() == 0.0 {
        return Ok(0.0);
    }
    let k = gas.constants();
    let scale =
        gas.coupling_over_kappa_sq() * gas.alpha().powf(0.25) * gas.mass().sqrt() / (k.c.powf(1.5) * k.hbar.powf(2.5));
    Ok(-scale * theta_constant(mode)? * gas.particle_number().powf(1.0 / 6.0))
}

/// T_0·(1 + ΔT_c/T_0).
pub fn analytic_condensation_temperature(gas: &GasSystem, mode: FormulaMode) -> Result<f64> {
    Ok(ideal_condensation_temperature(gas, mode) * (1.0 + condensation_shift(gas, mode)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTemperature {
    /// T_c (K)
    pub tc: f64,
    /// μ_c(T_c) (J)
    pub critical_mu: f64,
    /// g·n(0)/(k_BT) at T_c
    pub centre_coupling: f64,
    pub iterations: usize,
    /// Successive [T_lo, T_hi] brackets (K).
    pub bracket_history: Vec<[f64; 2]>,
}

/// T_c at which μ(T) reaches μ_c(T) for the gas's N: the temperature where
/// the thermal cloud at μ = μ_c holds exactly N particles.
pub fn numeric_condensation_temperature(gas: &GasSystem, opts: &NumericOptions) -> Result<CriticalTemperature> {
    if !(opts.rel_tol > 0.0 && opts.rel_tol < 1e-3) {
        return Err(Error::domain(format!(
            "rel_tol must lie in (0, 1e-3), got {}",
            opts.rel_tol
        )));
    }
    let target = gas.particle_number();
    let t0 = ideal_condensation_temperature(gas, FormulaMode::DerivedConsistent);
    let coupling = Isotherm::new(gas, t0, opts.thermal_bath)?.critical_reduced_mu();
    if coupling > opts.max_center_coupling {
        return Err(Error::domain(format!(
            "interaction energy at the trap centre is {coupling:.3} k_BT, above the limit {}",
            opts.max_center_coupling
        )));
    }
    let excess = |t: f64| critical_number(gas, t, opts).map(|n| n - target);

    let mut history = Vec::new();
    let mut width = 0.05;
    let (mut lo, mut hi) = (t0 * (1.0 - width), t0 * (1.0 + width));
    loop {
        history.push([lo, hi]);
        let below = excess(lo)?;
        let above = excess(hi)?;
        if below < 0.0 && above > 0.0 {
            break;
        }
        width *= 2.0;
        if width >= 0.8 {
            return Err(Error::Convergence(format!(
                "T_c not bracketed around T_0 = {t0:e} K; brackets tried: {history:?}"
            )));
        }
        (lo, hi) = (t0 * (1.0 - width), t0 * (1.0 + width));
    }

    let mut iterations = 0;
    while hi - lo > opts.rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Convergence(format!(
                "T_c bisection stalled; brackets: {history:?}"
            )));
        }
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        history.push([lo, hi]);
    }
    let tc = 0.5 * (lo + hi);
    let iso = Isotherm::new(gas, tc, opts.thermal_bath)?;
    let w_c = iso.critical_reduced_mu();
    Ok(CriticalTemperature {
        tc,
        critical_mu: iso.mu_from_reduced(w_c),
        centre_coupling: w_c,
        iterations,
        bracket_history: history,
    })
}
