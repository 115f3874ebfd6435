//! The `verify` command: invariant checks with one PASS/FAIL line each,
//! followed by the discrepancy report.

use std::fmt::Write as _;

use bosecrit::field::{minima, numeric_minimum, potential_value, symmetry_breaking_temperature, thermal_term_identity};
use bosecrit::semiclassical::{
    chemical_potential, condensation_shift, g_double_sum_at_one, ideal_condensation_temperature, local_fugacity,
    numeric_condensation_temperature, self_consistent_density, theta_constant, total_number, tsb_tc_relation,
    NumberMethod, PRINTED_HARMONIC_CONSTANT,
};
use bosecrit::specialfn::{bose_function, bose_function_integral, check_derivative_identity, zeta, SeriesAccuracy};
use bosecrit::units::harmonic_length;
use bosecrit::{
    FieldPotentialInput, FormulaMode, GasParameters, GasSystem, NumericOptions, PhysicalConstants, ThermalState,
};

use crate::commands::{numeric_options, RunOptions};
use crate::scenario::Scenario;
use crate::CliError;

type CheckResult = Result<(bool, String), CliError>;

struct Suite<'a> {
    out: &'a mut String,
    failed: usize,
}

impl Suite<'_> {
    fn check(&mut self, name: &str, f: impl FnOnce() -> CheckResult) {
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            self.failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        let _ = writeln!(self.out, "{status} {name}: {detail}");
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub const SERIES_INTEGRAL_POINTS: [(f64, f64); 9] = [
    (1.5, 0.1),
    (1.5, 0.5),
    (1.5, 0.9),
    (2.0, 0.1),
    (2.0, 0.5),
    (2.0, 0.9),
    (3.0, 0.1),
    (3.0, 0.5),
    (3.0, 0.9),
];

/// 20 (ν, z) points for the derivative identity.
pub fn identity_points() -> Vec<(f64, f64)> {
    let mut points = Vec::with_capacity(20);
    for nu in [1.5, 2.0, 2.5, 3.0] {
        for z in [0.05, 0.25, 0.5, 0.75, 0.95] {
            points.push((nu, z));
        }
    }
    points
}

fn ideal_version(gas: &GasSystem) -> Result<GasSystem, CliError> {
    Ok(GasParameters {
        lambda: Some(0.0),
        kappa: None,
        scattering_length: None,
        ..gas.to_parameters()
    }
    .validate(gas.constants())?)
}

fn with_kappa(gas: &GasSystem, factor: f64) -> Result<GasSystem, CliError> {
    Ok(GasParameters {
        lambda: None,
        kappa: Some(gas.kappa() * factor),
        ..gas.to_parameters()
    }
    .validate(gas.constants())?)
}

/// Runs every check, appending lines to `out`; returns the number of
/// failures.
pub fn run_suite(scenario: &Scenario, opts: &RunOptions, out: &mut String) -> Result<usize, CliError> {
    let gas = scenario.gas()?;
    let numeric = numeric_options(scenario, opts)?;
    let mut suite = Suite { out, failed: 0 };
    let acc = SeriesAccuracy::TIGHT;

    suite.check("[BEF] g_nu(1) = zeta(nu), nu in {3/2, 2, 3}", || {
        let mut worst: f64 = 0.0;
        for nu in [1.5, 2.0, 3.0] {
            worst = worst.max(rel(bose_function(nu, 1.0, &acc)?, zeta(nu)?));
        }
        Ok((worst < 1e-10, format!("max rel error {worst:.3e}")))
    });
    suite.check("[BEF] series vs integral, 9 points", || {
        let mut worst: f64 = 0.0;
        for (nu, z) in SERIES_INTEGRAL_POINTS {
            worst = worst.max(rel(bose_function(nu, z, &acc)?, bose_function_integral(nu, z, 1e-12)?));
        }
        Ok((worst < 1e-8, format!("max rel error {worst:.3e}")))
    });
    suite.check("[BEF1] z dg_nu/dz = g_(nu-1), 20 points", || {
        let mut worst: f64 = 0.0;
        for (nu, z) in identity_points() {
            worst = worst.max(check_derivative_identity(nu, z)?);
        }
        Ok((worst < 1e-6, format!("max residual {worst:.3e}")))
    });
    suite.check("G_3/2(1) stable under doubling of the truncation radius", || {
        let g = g_double_sum_at_one()?;
        let ok = g.change_on_doubling < 1e-8 && g.value > 0.35 && g.value < 2.0;
        Ok((
            ok,
            format!(
                "G = {:.15}, change {:.3e} at M = {}",
                g.value, g.change_on_doubling, g.radius
            ),
        ))
    });
    suite.check("[CTE] Theta stable under the G_3/2(1) truncation change", || {
        let g = g_double_sum_at_one()?;
        let (z2, z32, z3) = (zeta(2.0)?, zeta(1.5)?, zeta(3.0)?);
        let derived = g.change_on_doubling / (z2 * z32 - g.value);
        let verbatim = g.change_on_doubling / (z3 * z2 - g.value);
        let worst = derived.max(verbatim);
        Ok((worst < 1e-8, format!("relative change {worst:.3e}")))
    });

    let ideal = ideal_version(&gas)?;
    let t0 = ideal_condensation_temperature(&gas, FormulaMode::DerivedConsistent);
    suite.check("[CTI] ideal-gas closure N(T_0, mu = 0) = N", || {
        let state = ThermalState::new(t0, 0.0)?;
        let n = total_number(&ideal, &state, NumberMethod::Numeric, &numeric)?;
        let err = rel(n, gas.particle_number());
        Ok((err < 1e-3, format!("N = {n:.9e}, rel error {err:.3e}")))
    });

    let t_sb = symmetry_breaking_temperature(&gas, 0.0)?;
    let field_t = if t_sb.is_divergent() { t0 } else { 0.5 * t_sb.value() };
    suite.check("[Pot1] V(Phi) = V(-Phi)", || {
        let input = FieldPotentialInput::new(gas, field_t, scenario.phi())?.with_t4(true);
        let scale = gas.rest_energy();
        let exact = (1..=50).all(|i| {
            let f = scale * (i as f64 / 10.0).powi(3);
            potential_value(&input, f) == potential_value(&input, -f)
        });
        Ok((exact, "50 field values, bitwise equal".into()))
    });

    let mut tc_numeric = None;
    if gas.lambda() == 0.0 {
        suite.check("[TCS] T_c^SB diverges at lambda = 0", || {
            Ok((t_sb.is_divergent(), format!("T_c^SB = {}", t_sb.value())))
        });
        suite.check("numeric T_c = T_0 at lambda = 0", || {
            let found = numeric_condensation_temperature(&gas, &numeric)?.tc;
            tc_numeric = Some(found);
            let err = rel(found, t0);
            Ok((err < 1e-4, format!("T_c = {found:.9e} K, rel error {err:.3e}")))
        });
    } else {
        suite.check("[TCS] T_c^SB > T_0 > T_c (numeric and both modes)", || {
            let found = numeric_condensation_temperature(&gas, &numeric)?.tc;
            tc_numeric = Some(found);
            let mut ok = t_sb.value() > t0 && t0 > found;
            let mut detail = format!("numeric T_c = {found:.9e} K");
            for mode in FormulaMode::ALL {
                let m_t0 = ideal_condensation_temperature(&gas, mode);
                let m_tc = m_t0 * (1.0 + condensation_shift(&gas, mode)?);
                ok &= t_sb.value() > m_t0 && m_t0 > m_tc;
                let _ = write!(detail, ", {mode} T_c = {m_tc:.9e} K");
            }
            Ok((ok, detail))
        });
        suite.check("[SHIFT] shift is negative", || {
            let found = tc_numeric.ok_or_else(|| CliError::Validation("no numeric T_c".into()))?;
            let numeric_shift = (found - t0) / t0;
            let mut ok = numeric_shift < 0.0;
            for mode in FormulaMode::ALL {
                ok &= condensation_shift(&gas, mode)? < 0.0;
            }
            Ok((ok, format!("numeric shift {numeric_shift:.6e}")))
        });
        suite.check("thermal bath leaves T_c unchanged", || {
            let with = numeric_condensation_temperature(
                &gas,
                &NumericOptions {
                    thermal_bath: true,
                    ..numeric
                },
            )?
            .tc;
            let without = numeric_condensation_temperature(
                &gas,
                &NumericOptions {
                    thermal_bath: false,
                    ..numeric
                },
            )?
            .tc;
            let err = rel(without, with);
            Ok((err < 1e-8, format!("rel change {err:.3e}")))
        });
        suite.check("T_c independent of kappa at fixed a", || {
            let base = numeric_condensation_temperature(&gas, &numeric)?.tc;
            let other = with_kappa(&gas, 10.0)?;
            let moved = numeric_condensation_temperature(&other, &numeric)?.tc;
            let mut err = rel(moved, base);
            for mode in FormulaMode::ALL {
                err = err.max(rel(condensation_shift(&other, mode)?, condensation_shift(&gas, mode)?));
            }
            Ok((err < 1e-10, format!("max rel change {err:.3e} for kappa x 10")))
        });
        suite.check("thermal term identity", || {
            let r = thermal_term_identity(&gas, t0)?;
            Ok((r < 1e-12, format!("residual {r:.3e}")))
        });
        suite.check("[min] numeric minimum of V_T matches the closed form", || {
            let m = minima(&gas, field_t, scenario.phi())?;
            let input = FieldPotentialInput::new(gas, field_t, scenario.phi())?;
            let found = numeric_minimum(&input).ok_or_else(|| CliError::Validation("no minimum found".into()))?;
            let err = rel(found, m.phi_min_plus);
            Ok((err < 1e-8, format!("rel error {err:.3e} at T = T_c^SB/2")))
        });
    }

    let tc = tc_numeric.unwrap_or(t0);
    suite.check("[ES] local fugacity <= 1 on the profile at T_c, mu_c", || {
        let chem = chemical_potential(
            &gas,
            tc,
            &NumericOptions {
                thermal_bath: true,
                ..numeric
            },
        )?;
        let state = ThermalState::new(tc, chem.critical)?;
        let length = (PhysicalConstants::CODATA.kb * tc / (gas.rest_energy() * gas.alpha())).sqrt();
        let grid: Vec<f64> = (0..41).map(|i| 4.0 * length * i as f64 / 40.0).collect();
        let profile = self_consistent_density(&gas, &state, &grid, &numeric.density)?;
        let mut worst: f64 = 0.0;
        for (r, n) in profile.radii.iter().zip(&profile.density) {
            worst = worst.max(local_fugacity(&gas, &state, *n, *r)?);
        }
        Ok((worst <= 1.0 && profile.all_converged(), format!("max z = {worst:.15}")))
    });
    suite.check("mu(T) decreases above T_c", || {
        let mut previous = f64::INFINITY;
        let mut ok = true;
        let mut detail = String::from("mu/k_BT_c at T/T_c =");
        for f in [1.05, 1.1, 1.2, 1.4, 1.8] {
            let mu = chemical_potential(&gas, f * tc, &numeric)?.mu;
            ok &= mu < previous;
            previous = mu;
            let _ = write!(detail, " {f}: {:.6}", mu / (PhysicalConstants::CODATA.kb * tc));
        }
        Ok((ok, detail))
    });

    let failed = suite.failed;
    let out = suite.out;
    let _ = writeln!(out, "discrepancy report:");
    let state = ThermalState::new(t0, 0.0)?;
    let verbatim = total_number(
        &ideal,
        &state,
        NumberMethod::Analytic(FormulaMode::PaperVerbatim),
        &numeric,
    )?;
    let derived = total_number(
        &ideal,
        &state,
        NumberMethod::Analytic(FormulaMode::DerivedConsistent),
        &numeric,
    )?;
    let _ = writeln!(
        out,
        "  [NC1] paper-verbatim / derived-consistent N at lambda = 0: {:.12}",
        verbatim / derived
    );
    for mode in FormulaMode::ALL {
        let _ = writeln!(out, "  [CTE] Theta ({mode}) = {:.12e}", theta_constant(mode)?);
    }
    if gas.scattering_length() > 0.0 {
        let x = gas.scattering_length() / harmonic_length(&gas)? * gas.particle_number().powf(1.0 / 6.0);
        for mode in FormulaMode::ALL {
            let analytic = condensation_shift(&gas, mode)?;
            let _ = write!(
                out,
                "  [SHIFT] {mode}: shift = {analytic:.9e} = {:.6} (a/a_ho) N^1/6",
                analytic / x
            );
            match tc_numeric {
                Some(found) => {
                    let _ = writeln!(out, ", numeric/analytic = {:.6}", (found - t0) / t0 / analytic);
                }
                None => {
                    let _ = writeln!(out);
                }
            }
        }
    }
    if gas.lambda() > 0.0 && gas.kappa() > 0.0 {
        for mode in FormulaMode::ALL {
            let relation = condensation_shift(&gas, mode).and_then(|s| tsb_tc_relation(&gas, 1.0 + s, mode));
            let _ = match relation {
                Ok(r) => writeln!(
                    out,
                    "  [REL]/[HO] {mode}: ratio {:.9}, constant in place of {PRINTED_HARMONIC_CONSTANT}: {:.9}",
                    r.ratio, r.harmonic_constant
                ),
                Err(e) => writeln!(out, "  [REL]/[HO] {mode}: not available ({e})"),
            };
        }
    }
    let _ = writeln!(out, "{} checks failed", failed);
    Ok(failed)
}
