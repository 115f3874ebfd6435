use std::fmt::Write as _;

use rayon::prelude::*;

use bosecrit::field::{minima, symmetry_breaking_temperature};
use bosecrit::scale::{kappa_from_healing, log_spaced, HealingInput};
use bosecrit::semiclassical::{
    condensation_shift, critical_chemical_potential, ideal_condensation_temperature, numeric_condensation_temperature,
    quantum_concentration, self_consistent_density, temperature_report, tsb_tc_relation, DensitySolverOptions,
    PRINTED_HARMONIC_CONSTANT,
};
use bosecrit::units::harmonic_length;
use bosecrit::{Error, FormulaMode, GasSystem, NumericOptions, PhysicalConstants, SymmetryBreakingTemperature};

use crate::scenario::{Key, Scenario};
use crate::{csv_number, verify, CliError, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Symmetry-breaking temperature
    Tsb,
    /// Ideal condensation temperature in both formula modes
    T0,
    /// First-order condensation shift
    Shift,
    /// T_c from the self-consistent density
    TcNumeric,
    /// Scale kappa from the healing length
    Kappa,
    /// Self-consistent density profile as CSV
    Density,
    /// Invariant suite and discrepancy report
    Verify,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides the scenario's formula mode.
    pub mode: Option<FormulaMode>,
    /// Relative tolerance override.
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub report: String,
    pub table: Option<Table>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

fn sci(v: f64) -> String {
    format!("{v:.9e}")
}

pub(crate) fn numeric_options(scenario: &Scenario, opts: &RunOptions) -> Result<NumericOptions, CliError> {
    let mut numeric = NumericOptions {
        thermal_bath: scenario.thermal_bath,
        ..Default::default()
    };
    if let Some(tol) = opts.tolerance {
        numeric.rel_tol = tol;
    }
    if let Some(max) = scenario.max_iterations()? {
        numeric.density.max_iterations = max;
    }
    Ok(numeric)
}

type SweepRows = Option<(Key, Vec<(f64, Vec<String>)>)>;

/// Evaluates `f` at every sweep point in parallel; rows come back in sweep
/// order.
fn sweep_rows<F>(scenario: &Scenario, f: F) -> Result<SweepRows, CliError>
where
    F: Fn(&Scenario) -> Result<Vec<String>, CliError> + Sync,
{
    let Some(sweep) = &scenario.sweep else { return Ok(None) };
    let rows = sweep
        .values()
        .into_par_iter()
        .map(|v| {
            let point = scenario.with(sweep.key, v)?;
            Ok((v, f(&point)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Some((sweep.key, rows)))
}

fn sweep_table<F>(scenario: &Scenario, columns: &[&str], f: F) -> Result<Option<Table>, CliError>
where
    F: Fn(&Scenario) -> Result<Vec<String>, CliError> + Sync,
{
    let Some((key, rows)) = sweep_rows(scenario, f)? else {
        return Ok(None);
    };
    let mut header = vec![key.name()];
    header.extend_from_slice(columns);
    let mut table = Table::new(&header);
    for (v, mut row) in rows {
        row.insert(0, csv_number(v));
        table.rows.push(row);
    }
    Ok(Some(table))
}

pub fn run(command: Command, scenario: &Scenario, opts: &RunOptions) -> Result<Outcome, CliError> {
    let mode = opts.mode.unwrap_or(scenario.mode);
    let mut out = Outcome::default();
    let _ = writeln!(out.report, "scenario: {}", scenario.name);
    match command {
        Command::Tsb => tsb(scenario, &mut out)?,
        Command::T0 => t0(scenario, &mut out)?,
        Command::Shift => shift(scenario, mode, &mut out)?,
        Command::TcNumeric => tc_numeric(scenario, opts, &mut out)?,
        Command::Kappa => kappa(scenario, &mut out)?,
        Command::Density => density(scenario, opts, &mut out)?,
        Command::Verify => {
            let failed = verify::run_suite(scenario, opts, &mut out.report)?;
            if failed > 0 {
                out.exit_code = 3;
            }
        }
    }
    Ok(out)
}

fn tsb_label(phi: f64) -> &'static str {
    if phi == 0.0 {
        "TCS"
    } else {
        "TCS0"
    }
}

fn tsb(scenario: &Scenario, out: &mut Outcome) -> Result<(), CliError> {
    let gas = scenario.gas()?;
    let phi = scenario.phi();
    let label = tsb_label(phi);
    match symmetry_breaking_temperature(&gas, phi)? {
        SymmetryBreakingTemperature::Finite(t) => {
            let _ = writeln!(out.report, "[{label}] T_c^SB = {} K (phi = {phi})", sci(t));
        }
        SymmetryBreakingTemperature::Divergent => {
            let _ = writeln!(
                out.report,
                "[{label}] T_c^SB diverges: lambda = 0, the Z2 symmetry is never broken"
            );
            out.warnings
                .push("lambda = 0: T_c^SB is infinite (ideal-gas limit)".to_string());
        }
    }
    if let Some(t) = scenario.temperature() {
        if gas.lambda() > 0.0 {
            let m = minima(&gas, t, phi)?;
            let state = if m.broken { "broken" } else { "restored" };
            let _ = writeln!(
                out.report,
                "[min] Phi_min = +/-{} at T = {} K (symmetry {state})",
                sci(m.phi_min_plus),
                sci(t)
            );
        }
    }
    out.table = sweep_table(scenario, &["t_sb_k"], |s| {
        let t = symmetry_breaking_temperature(&s.gas()?, s.phi())?.value();
        Ok(vec![csv_number(t)])
    })?;
    Ok(())
}

fn t0(scenario: &Scenario, out: &mut Outcome) -> Result<(), CliError> {
    let gas = scenario.gas()?;
    let paper = ideal_condensation_temperature(&gas, FormulaMode::PaperVerbatim);
    let derived = ideal_condensation_temperature(&gas, FormulaMode::DerivedConsistent);
    let _ = writeln!(
        out.report,
        "[CTI] T_0 (paper-verbatim, 1/sqrt(2 alpha^3)) = {} K",
        sci(paper)
    );
    let _ = writeln!(
        out.report,
        "[CTI] T_0 (derived-consistent, hbar omega0 (N/zeta(3))^1/3) = {} K",
        sci(derived)
    );
    let _ = writeln!(
        out.report,
        "paper-verbatim / derived-consistent = {:.12} (2^-1/3 = {:.12})",
        paper / derived,
        2f64.powf(-1.0 / 3.0)
    );
    out.table = sweep_table(scenario, &["t0_paper_k", "t0_derived_k"], |s| {
        let g = s.gas()?;
        Ok(vec![
            csv_number(ideal_condensation_temperature(&g, FormulaMode::PaperVerbatim)),
            csv_number(ideal_condensation_temperature(&g, FormulaMode::DerivedConsistent)),
        ])
    })?;
    Ok(())
}

fn shift(scenario: &Scenario, mode: FormulaMode, out: &mut Outcome) -> Result<(), CliError> {
    let gas = scenario.gas()?;
    let report = temperature_report(&gas, mode, None)?;
    let _ = writeln!(out.report, "mode: {mode}");
    let _ = writeln!(
        out.report,
        "[CTE] Theta = {} ({})",
        sci(report.theta.value),
        report.theta.source
    );
    let _ = writeln!(
        out.report,
        "[CTI] T_0 = {} K ({})",
        sci(report.t0.value),
        report.t0.source
    );
    let _ = writeln!(
        out.report,
        "[SHIFT] Delta T_c / T_0 = {} ({})",
        sci(report.shift.value),
        report.shift.source
    );
    let _ = writeln!(out.report, "T_c = T_0 (1 + shift) = {} K", sci(report.tc.value));
    match report.t_sb {
        SymmetryBreakingTemperature::Finite(t) => {
            let _ = writeln!(out.report, "[TCS] T_c^SB = {} K", sci(t));
        }
        SymmetryBreakingTemperature::Divergent => {
            let _ = writeln!(out.report, "[TCS] T_c^SB diverges (lambda = 0)");
        }
    }
    let ordering = if report.ordering_ok { "holds" } else { "VIOLATED" };
    let _ = writeln!(out.report, "ordering T_c^SB > T_0 > T_c: {ordering}");
    if !report.ordering_ok {
        out.warnings
            .push("T_c^SB > T_0 > T_c does not hold for this scenario".into());
    }
    if gas.scattering_length() > 0.0 {
        let x = gas.scattering_length() / harmonic_length(&gas)? * gas.particle_number().powf(1.0 / 6.0);
        let _ = writeln!(out.report, "shift / ((a/a_ho) N^1/6) = {:.6}", report.shift.value / x);
    }
    if gas.lambda() > 0.0 && gas.kappa() > 0.0 {
        let rel = tsb_tc_relation(&gas, report.t_ratio, mode)?;
        let _ = writeln!(
            out.report,
            "[REL] T_c^SB at T_r = {:.12} : {} K",
            report.t_ratio,
            sci(rel.general)
        );
        let _ = writeln!(
            out.report,
            "[HO] T_c^SB with {PRINTED_HARMONIC_CONSTANT}: {} K",
            sci(rel.harmonic)
        );
        let _ = writeln!(
            out.report,
            "[REL]/[HO] = {}; constant that would replace {PRINTED_HARMONIC_CONSTANT}: {}",
            sci(rel.ratio),
            sci(rel.harmonic_constant)
        );
        let _ = writeln!(
            out.report,
            "lambda eliminated exactly between [TCS] and [SHIFT]: T_c^SB = {} K",
            sci(rel.consistent)
        );
    }
    if mode == FormulaMode::PaperVerbatim {
        out.warnings.push(
            "paper-verbatim T_0 uses 1/sqrt(2 alpha^3): N is off by a factor 2 from the harmonic-oscillator result"
                .into(),
        );
    }
    out.table = sweep_table(scenario, &["t0_k", "shift", "tc_k"], |s| {
        let g = s.gas()?;
        let t0 = ideal_condensation_temperature(&g, mode);
        let sh = condensation_shift(&g, mode)?;
        Ok(vec![csv_number(t0), csv_number(sh), csv_number(t0 * (1.0 + sh))])
    })?;
    Ok(())
}

fn tc_numeric(scenario: &Scenario, opts: &RunOptions, out: &mut Outcome) -> Result<(), CliError> {
    let gas = scenario.gas()?;
    let numeric = numeric_options(scenario, opts)?;
    let found = numeric_condensation_temperature(&gas, &numeric)?;
    let t0 = ideal_condensation_temperature(&gas, FormulaMode::DerivedConsistent);
    let shift = (found.tc - t0) / t0;
    let bath = if numeric.thermal_bath { "on" } else { "off" };
    let _ = writeln!(
        out.report,
        "T_c (self-consistent density, thermal bath {bath}) = {} K",
        sci(found.tc)
    );
    let _ = writeln!(
        out.report,
        "bisection steps = {}, g n(0)/k_B T_c = {}",
        found.iterations,
        sci(found.centre_coupling)
    );
    let _ = writeln!(out.report, "[CTI] T_0 (derived-consistent) = {} K", sci(t0));
    let _ = writeln!(out.report, "numeric shift (T_c - T_0)/T_0 = {}", sci(shift));
    for mode in FormulaMode::ALL {
        let analytic = condensation_shift(&gas, mode)?;
        if analytic == 0.0 {
            let _ = writeln!(out.report, "[SHIFT] analytic shift ({mode}) = 0");
        } else {
            let _ = writeln!(
                out.report,
                "[SHIFT] analytic shift ({mode}) = {}; numeric/analytic = {:.6}",
                sci(analytic),
                shift / analytic
            );
        }
    }
    out.table = sweep_table(
        scenario,
        &["tc_numeric_k", "t0_k", "shift_numeric", "shift_paper", "shift_derived"],
        |s| {
            let g = s.gas()?;
            let tc = numeric_condensation_temperature(&g, &numeric_options(s, opts)?)?.tc;
            let t0 = ideal_condensation_temperature(&g, FormulaMode::DerivedConsistent);
            Ok(vec![
                csv_number(tc),
                csv_number(t0),
                csv_number((tc - t0) / t0),
                csv_number(condensation_shift(&g, FormulaMode::PaperVerbatim)?),
                csv_number(condensation_shift(&g, FormulaMode::DerivedConsistent)?),
            ])
        },
    )?;
    Ok(())
}

const QUOTED_KAPPA: f64 = 3e39;

fn kappa(scenario: &Scenario, out: &mut Outcome) -> Result<(), CliError> {
    let base = scenario.healing_input()?;
    let si = PhysicalConstants::CODATA;
    let (key, points): (Key, Vec<(f64, HealingInput)>) = match &scenario.sweep {
        Some(sweep) => {
            let points = sweep
                .values()
                .into_iter()
                .map(|v| Ok((v, scenario.with(sweep.key, v)?.healing_input()?)))
                .collect::<Result<_, CliError>>()?;
            (sweep.key, points)
        }
        None => (
            Key::NPerM3,
            log_spaced(1e19, 1e21, 21)
                .into_iter()
                .map(|n| (n, base.with_density(n)))
                .collect(),
        ),
    };
    let results: Vec<_> = points
        .par_iter()
        .map(|(_, input)| kappa_from_healing(&si, input))
        .collect();

    let mut table = Table::new(&[key.name(), "kappa_si", "lambda", "mu_j", "status"]);
    let mut closest: Option<(f64, f64)> = None;
    for ((v, _), result) in points.iter().zip(results) {
        match result {
            Ok(est) => {
                let _ = writeln!(
                    out.report,
                    "[kappa] {key} = {}: kappa = {} J^-1 m^-3/2, lambda = {}, [HL] mu = {} J",
                    sci(*v),
                    sci(est.kappa),
                    sci(est.lambda),
                    sci(est.mu)
                );
                let distance = (est.kappa / QUOTED_KAPPA).log10().abs();
                if closest.is_none_or(|(_, d)| distance < d) {
                    closest = Some((est.kappa, distance));
                }
                table.rows.push(vec![
                    csv_number(*v),
                    csv_number(est.kappa),
                    csv_number(est.lambda),
                    csv_number(est.mu),
                    "ok".into(),
                ]);
            }
            Err(Error::NegativeRadicand { critical_density }) => {
                let _ = writeln!(
                    out.report,
                    "[kappa] {key} = {}: negative radicand (n* = {} m^-3)",
                    sci(*v),
                    sci(critical_density)
                );
                table.rows.push(vec![
                    csv_number(*v),
                    "NaN".into(),
                    "NaN".into(),
                    "NaN".into(),
                    "negative-radicand".into(),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    match closest {
        Some((k, d)) => {
            let _ = writeln!(
                out.report,
                "[OM] quoted kappa ~ {QUOTED_KAPPA:e}; closest tabulated kappa = {} ({:.3} decades away)",
                sci(k),
                d
            );
        }
        None => out.warnings.push("no density in the table gives a real kappa".into()),
    }
    if scenario.value(Key::ANm).is_some() {
        let cm = HealingInput {
            scattering_length: base.scattering_length * 1e7,
            ..base
        };
        let _ = writeln!(
            out.report,
            "note: a is read in nanometres; read as centimetres the radicand is negative above n* = {} m^-3",
            sci(cm.critical_density())
        );
    }
    out.table = Some(table);
    Ok(())
}

fn density(scenario: &Scenario, opts: &RunOptions, out: &mut Outcome) -> Result<(), CliError> {
    let gas: GasSystem = scenario.gas()?;
    let t = match scenario.temperature() {
        Some(t) => t,
        None => {
            out.warnings
                .push("t_nk not given; using the derived-consistent T_0".into());
            ideal_condensation_temperature(&gas, FormulaMode::DerivedConsistent)
        }
    };
    let mu = match scenario.chemical_potential() {
        Some(mu) => mu,
        None => {
            let n_centre = quantum_concentration(&gas, t) * bosecrit::specialfn::zeta(1.5)?;
            critical_chemical_potential(&gas, t, n_centre)?
        }
    };
    let state = bosecrit::ThermalState::new(t, mu)?;
    let kt = gas.constants().kb * t;
    let r_max = scenario
        .r_max()
        .unwrap_or_else(|| 5.0 * (kt / (gas.rest_energy() * gas.alpha())).sqrt());
    let points = scenario.grid_points()?;
    let grid: Vec<f64> = (0..points).map(|i| r_max * i as f64 / (points - 1) as f64).collect();
    let mut solver = DensitySolverOptions::default();
    if let Some(tol) = opts.tolerance {
        solver.rel_tol = tol;
    }
    if let Some(max) = scenario.max_iterations()? {
        solver.max_iterations = max;
    }
    let profile = self_consistent_density(&gas, &state, &grid, &solver)?;

    let _ = writeln!(out.report, "[DE1] density at T = {} K, mu = {} J", sci(t), sci(mu));
    let _ = writeln!(out.report, "grid: {points} points on [0, {}] m", sci(r_max));
    let _ = writeln!(out.report, "n(0) = {} m^-3", sci(profile.density[0]));
    let unconverged = profile.converged.iter().filter(|c| !**c).count();
    if unconverged > 0 {
        out.warnings.push(format!("{unconverged} grid points did not converge"));
        out.exit_code = 2;
    }
    let mut table = Table::new(&["r_m", "n_per_m3", "converged"]);
    for ((r, n), c) in profile.radii.iter().zip(&profile.density).zip(&profile.converged) {
        table.rows.push(vec![csv_number(*r), csv_number(*n), c.to_string()]);
    }
    out.table = Some(table);
    Ok(())
}
