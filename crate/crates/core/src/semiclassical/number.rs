//! Particle number N = ∫d³r n(r), numerically or from the first-order
//! closed forms, and the chemical potential that fixes it.

use std::cell::Cell;
use std::f64::consts::PI;

use super::density::solve_reduced_density;
use super::{FormulaMode, Isotherm, NumericOptions, ThermalState};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::specialfn::{bose_function, g_double_sum, zeta, SeriesAccuracy};
use crate::units::GasSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberMethod {
    /// Radial quadrature of the self-consistent density.
    Numeric,
    /// First-order closed form in the given mode.
    Analytic(FormulaMode),
}

impl From<FormulaMode> for NumberMethod {
    fn from(mode: FormulaMode) -> Self {
        NumberMethod::Analytic(mode)
    }
}

/// Integrand ρ²·n/n_Q at one reduced radius.
fn shell(iso: &Isotherm, w: f64, rho: f64, opts: &NumericOptions) -> Result<f64> {
    let p = solve_reduced_density(iso.coupling, rho * rho - w, &opts.density)?;
    if !p.converged {
        return Err(Error::Convergence(format!(
            "density at rho = {rho} not converged after {} iterations",
            p.iterations
        )));
    }
    Ok(rho * rho * p.reduced_density)
}

/// Radius beyond which ρ²·n/n_Q stays below 1e-16 of its peak.
fn cutoff_radius(iso: &Isotherm, w: f64, opts: &NumericOptions) -> Result<f64> {
    let mut peak = 0.0f64;
    for i in 1..=16 {
        peak = peak.max(shell(iso, w, 0.25 * i as f64, opts)?);
    }
    let mut rho = 4.0 + w.max(0.0).sqrt();
    while shell(iso, w, rho, opts)? > 1e-16 * peak {
        rho += 0.25;
    }
    Ok(rho)
}

/// N at reduced chemical potential w = β(μ − ε_b), together with the
/// quadrature cut-off ρ_max.
pub(crate) fn numeric_number(iso: &Isotherm, w: f64, opts: &NumericOptions) -> Result<(f64, f64)> {
    let rho_max = cutoff_radius(iso, w, opts)?;
    let (n, _) = numeric_number_to(iso, w, rho_max, opts)?;
    Ok((n, rho_max))
}

pub(crate) fn numeric_number_to(iso: &Isotherm, w: f64, rho_max: f64, opts: &NumericOptions) -> Result<(f64, f64)> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |rho: f64| match shell(iso, w, rho, opts) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let integral = integrate(integrand, 0.0, rho_max, QuadOptions::relative(opts.quadrature_rel_tol))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let scale = 4.0 * PI * iso.length.powi(3) * iso.n_q;
    Ok((scale * integral.value, scale * integral.error))
}

/// g_ν(e^x), continued to small x > 0 by its first-order Taylor expansion.
/// Closed forms are evaluated at μ = μ_c = O(λ) > 0, where only the first
/// order is meaningful.
fn bose_linear(nu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return bose_function(nu, x.exp(), &SeriesAccuracy::TIGHT);
    }
    let slope = if nu > 2.0 { zeta(nu - 1.0)? } else { 0.0 };
    Ok(zeta(nu)? + x * slope)
}

fn double_sum_clamped(x: f64) -> Result<f64> {
    g_double_sum(x.min(0.0).exp(), &SeriesAccuracy::new(1e-13, 10_000_000)?)
}

fn analytic_number(gas: &GasSystem, state: &ThermalState, mode: FormulaMode, thermal_bath: bool) -> Result<f64> {
    let k = gas.constants();
    let kt = k.kb * state.temperature;
    let x = state.chemical_potential / kt;
    let alpha = gas.alpha();
    let hbar = k.hbar;
    let c = k.c;
    let bath = if thermal_bath { 1.0 } else { 0.0 };
    let g3 = bose_linear(3.0, x)?;
    let interacting = gas.lambda() != 0.0;
    match mode {
        FormulaMode::PaperVerbatim => {
            let ideal = (kt / (hbar * c)).powi(3) / (2.0 * alpha.powi(3)).sqrt() * g3;
            if !interacting {
                return Ok(ideal);
            }
            let m = gas.mass();
            let mean_field = gas.coupling_over_kappa_sq() / (8.0 * hbar.powi(6) * c.powi(5))
                * (m / (PI * alpha)).powf(1.5)
                * double_sum_clamped(x)?
                * kt.powf(3.5);
            let g2 = bose_linear(2.0, x.min(0.0))?;
            let thermal = gas.lambda() / ((2.0 * alpha).powf(1.5) * m * hbar.powi(3) * c.powi(5)) * g2 * kt.powi(4);
            Ok(ideal - mean_field + bath * thermal)
        }
        FormulaMode::DerivedConsistent => {
            let hbar_omega = hbar * c * (2.0 * alpha).sqrt();
            let prefactor = (kt / hbar_omega).powi(3);
            if !interacting {
                return Ok(prefactor * g3);
            }
            let iso = Isotherm::new(gas, state.temperature, thermal_bath)?;
            let g2 = bose_linear(2.0, x.min(0.0))?;
            let thermal = iso.beta * iso.bath_shift * g2;
            let mean_field = iso.coupling * double_sum_clamped(x)?;
            Ok(prefactor * (g3 - thermal - mean_field))
        }
    }
}

/// N for a given state. The numeric route keeps the thermal-bath shift; see
/// [`critical_number`] for switching it off.
pub fn total_number(gas: &GasSystem, state: &ThermalState, method: NumberMethod, opts: &NumericOptions) -> Result<f64> {
    match method {
        NumberMethod::Numeric => {
            let iso = Isotherm::new(gas, state.temperature, opts.thermal_bath)?;
            numeric_number(&iso, iso.reduced_mu(state.chemical_potential), opts).map(|(n, _)| n)
        }
        NumberMethod::Analytic(mode) => analytic_number(gas, state, mode, opts.thermal_bath),
    }
}

/// Number of thermal particles the trap holds at T when μ sits at μ_c(T),
/// i.e. the largest N that is not yet condensed.
pub fn critical_number(gas: &GasSystem, temperature: f64, opts: &NumericOptions) -> Result<f64> {
    let iso = Isotherm::new(gas, temperature, opts.thermal_bath)?;
    let n_centre = iso.n_q * super::ZETA_3_2;
    let mu_c = gas.mean_field_coefficient() * n_centre + iso.bath_shift;
    numeric_number(&iso, iso.reduced_mu(mu_c), opts).map(|(n, _)| n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChemicalPotential {
    /// μ (J); equal to `critical` when the gas is saturated.
    pub mu: f64,
    /// μ_c(T) (J)
    pub critical: f64,
    /// N cannot be reached below μ_c: the excess sits in the condensate.
    pub saturated: bool,
    pub iterations: usize,
}

/// μ(T) at the gas's particle number, by bisection on μ ∈ (−∞, μ_c(T)].
pub fn chemical_potential(gas: &GasSystem, temperature: f64, opts: &NumericOptions) -> Result<ChemicalPotential> {
    let iso = Isotherm::new(gas, temperature, opts.thermal_bath)?;
    let target = gas.particle_number();
    let w_c = iso.critical_reduced_mu();
    let critical = iso.mu_from_reduced(w_c);
    let (n_c, _) = numeric_number(&iso, w_c, opts)?;
    if n_c <= target {
        return Ok(ChemicalPotential {
            mu: critical,
            critical,
            saturated: true,
            iterations: 0,
        });
    }
    let mut hi = w_c;
    let mut gap = 1.0;
    let mut lo = w_c - gap;
    let mut iterations = 0;
    while numeric_number(&iso, lo, opts)?.0 > target {
        hi = lo;
        gap *= 2.0;
        lo = w_c - gap;
        iterations += 1;
        if gap > 1e4 {
            return Err(Error::Convergence(format!(
                "no lower bracket for mu at T = {temperature}"
            )));
        }
    }
    while hi - lo > 1e-14 * lo.abs().max(1e-3) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if numeric_number(&iso, mid, opts)?.0 > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ChemicalPotential {
        mu: iso.mu_from_reduced(0.5 * (lo + hi)),
        critical,
        saturated: false,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::rb87;
    use super::super::ZETA_3;
    use super::*;

    fn fast() -> NumericOptions {
        NumericOptions {
            quadrature_rel_tol: 1e-10,
            ..Default::default()
        }
    }

    #[test]
    fn ideal_gas_at_zero_mu() {
        let gas = rb87(0.0);
        let t = 1e-7;
        let state = ThermalState::new(t, 0.0).unwrap();
        let k = gas.constants();
        let expected = (k.kb * t / (k.hbar * gas.omega0())).powi(3) * ZETA_3;
        let derived = total_number(&gas, &state, FormulaMode::DerivedConsistent.into(), &fast()).unwrap();
        let verbatim = total_number(&gas, &state, FormulaMode::PaperVerbatim.into(), &fast()).unwrap();
        let numeric = total_number(&gas, &state, NumberMethod::Numeric, &fast()).unwrap();
        assert!((derived - expected).abs() < 1e-12 * expected);
        assert!((verbatim / derived - 2.0).abs() < 1e-12);
        assert!((numeric - expected).abs() < 1e-9 * expected, "{numeric} vs {expected}");
    }

    #[test]
    fn ideal_gas_below_zero_mu() {
        let gas = rb87(0.0);
        let t = 1e-7;
        let kt = gas.constants().kb * t;
        for x in [-0.01, -0.5, -3.0] {
            let state = ThermalState::new(t, x * kt).unwrap();
            let derived = total_number(&gas, &state, FormulaMode::DerivedConsistent.into(), &fast()).unwrap();
            let numeric = total_number(&gas, &state, NumberMethod::Numeric, &fast()).unwrap();
            assert!((numeric - derived).abs() < 1e-8 * derived);
        }
    }

    #[test]
    fn cutoff_doubling_is_invisible() {
        let gas = rb87(5.77e-9);
        let opts = NumericOptions::default();
        let iso = Isotherm::new(&gas, 1e-7, true).unwrap();
        let w = iso.critical_reduced_mu();
        let (n, rho_max) = numeric_number(&iso, w, &opts).unwrap();
        let (n2, _) = numeric_number_to(&iso, w, 2.0 * rho_max, &opts).unwrap();
        assert!((n - n2).abs() < 1e-10 * n);
    }

    #[test]
    fn interacting_first_order_matches_numeric() {
        // the residual must shrink like a² as the coupling goes down
        let t = 1e-7;
        let gap = |a: f64| {
            let gas = rb87(a);
            let kt = gas.constants().kb * t;
            let state = ThermalState::new(t, -0.2 * kt).unwrap();
            let numeric = total_number(&gas, &state, NumberMethod::Numeric, &NumericOptions::default()).unwrap();
            let analytic = total_number(
                &gas,
                &state,
                FormulaMode::DerivedConsistent.into(),
                &NumericOptions::default(),
            )
            .unwrap();
            (analytic - numeric).abs() / numeric
        };
        let ratio = gap(4e-9) / gap(2e-9);
        assert!((ratio - 4.0).abs() < 0.3, "{ratio}");
    }

    #[test]
    fn chemical_potential_brackets() {
        let gas = rb87(5.77e-9).with_particle_number(1e4).unwrap();
        let opts = fast();
        let t_hot = 2e-7;
        let mu = chemical_potential(&gas, t_hot, &opts).unwrap();
        assert!(!mu.saturated && mu.mu < mu.critical);
        let state = ThermalState::new(t_hot, mu.mu).unwrap();
        let n = total_number(&gas, &state, NumberMethod::Numeric, &opts).unwrap();
        assert!((n - 1e4).abs() < 1e-9 * 1e4);

        let cold = chemical_potential(&gas, 1e-9, &opts).unwrap();
        assert!(cold.saturated);
        assert_eq!(cold.mu, cold.critical);
    }

    #[test]
    fn chemical_potential_rises_as_temperature_falls() {
        let gas = rb87(5.77e-9).with_particle_number(1e4).unwrap();
        let opts = fast();
        let mut previous = f64::NEG_INFINITY;
        for t in [4e-7, 3e-7, 2.5e-7, 2.2e-7] {
            let mu = chemical_potential(&gas, t, &opts).unwrap();
            assert!(!mu.saturated);
            assert!(mu.mu > previous);
            previous = mu.mu;
        }
    }
}
