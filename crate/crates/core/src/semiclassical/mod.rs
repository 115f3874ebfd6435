//! Semiclassical (Hartree–Fock) thermodynamics of the trapped gas.
//!
//! Energies carry the mean field g·n(r) with g = λκ⁻²/(2mc²), the
//! thermal-bath shift ε_b = λ(k_BT)²/(4mc²) and the trap mc²αr². Everything
//! that is printed in closed form comes in two [`FormulaMode`]s; the
//! self-consistent density and its radial integral form an independent
//! numerical route to T_c.

mod condensation;
mod density;
mod number;
mod relation;
mod report;

pub use condensation::{
    analytic_condensation_temperature, condensation_shift, g_double_sum_at_one, ideal_condensation_temperature,
    numeric_condensation_temperature, theta_constant, CriticalTemperature,
};
pub use density::{
    first_order_density, self_consistent_density, solve_reduced_density, DensityMethod, DensityProfile,
    DensitySolverOptions, PointSolution,
};
pub use number::{chemical_potential, critical_number, total_number, ChemicalPotential, NumberMethod};
pub use relation::{tsb_tc_relation, RelationReport, PRINTED_HARMONIC_CONSTANT};
pub use report::{temperature_report, NumericComparison, Sourced, TemperatureReport};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::units::GasSystem;

pub(crate) const ZETA_3_2: f64 = 2.612_375_348_685_488_4;
pub(crate) const ZETA_2: f64 = PI * PI / 6.0;
pub(crate) const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Which version of the closed-form results to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FormulaMode {
    /// The expressions exactly as printed, including the 1/√(2α³) prefactor.
    PaperVerbatim,
    /// Re-derived expressions: prefactor 1/(2α)^{3/2}, which reproduces the
    /// harmonic-oscillator result, and the matching first-order shift.
    #[default]
    DerivedConsistent,
}

impl FormulaMode {
    pub const ALL: [FormulaMode; 2] = [FormulaMode::PaperVerbatim, FormulaMode::DerivedConsistent];

    pub fn label(self) -> &'static str {
        match self {
            FormulaMode::PaperVerbatim => "paper-verbatim",
            FormulaMode::DerivedConsistent => "derived-consistent",
        }
    }
}

impl fmt::Display for FormulaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FormulaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-verbatim" => Ok(FormulaMode::PaperVerbatim),
            "derived-consistent" => Ok(FormulaMode::DerivedConsistent),
            other => Err(Error::domain(format!("unknown formula mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    /// T (K)
    pub temperature: f64,
    /// μ (J)
    pub chemical_potential: f64,
}

impl ThermalState {
    pub fn new(temperature: f64, chemical_potential: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::non_physical(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !chemical_potential.is_finite() {
            return Err(Error::non_physical("chemical potential must be finite"));
        }
        Ok(ThermalState {
            temperature,
            chemical_potential,
        })
    }

    pub fn beta(&self, gas: &GasSystem) -> f64 {
        1.0 / (gas.constants().kb * self.temperature)
    }

    pub fn fugacity(&self, gas: &GasSystem) -> f64 {
        (self.beta(gas) * self.chemical_potential).exp()
    }
}

/// Tolerances and switches for the numerical route to T_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    /// Relative tolerance on T in the outer root solve.
    pub rel_tol: f64,
    /// Relative tolerance of the radial quadrature.
    pub quadrature_rel_tol: f64,
    pub density: DensitySolverOptions,
    /// Keep the thermal-bath shift ε_b in both the spectrum and μ_c.
    pub thermal_bath: bool,
    /// Upper limit on g·n(0)/(k_BT) at the critical point. Beyond it the
    /// first-order picture the oracle is meant to test no longer applies.
    pub max_center_coupling: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            rel_tol: 1e-12,
            quadrature_rel_tol: 1e-12,
            // the quadrature needs an integrand smooth to well below its own
            // tolerance
            density: DensitySolverOptions {
                rel_tol: 1e-14,
                ..DensitySolverOptions::default()
            },
            thermal_bath: true,
            max_center_coupling: 1.0,
        }
    }
}

impl NumericOptions {
    pub fn without_thermal_bath(mut self) -> Self {
        self.thermal_bath = false;
        self
    }
}

/// Quantum concentration n_Q = (mk_BT/2πħ²)^{3/2} (m⁻³).
pub fn quantum_concentration(gas: &GasSystem, temperature: f64) -> f64 {
    let k = gas.constants();
    (gas.mass() * k.kb * temperature / (2.0 * PI * k.hbar * k.hbar)).powf(1.5)
}

/// Single-particle energy [mc²] + p²/2m + g·n + ε_b(T) + mc²αr² (J).
pub fn energy_spectrum(
    gas: &GasSystem,
    momentum: f64,
    n_local: f64,
    temperature: f64,
    r: f64,
    include_rest_mass: bool,
) -> f64 {
    let rest = if include_rest_mass { gas.rest_energy() } else { 0.0 };
    rest + momentum * momentum / (2.0 * gas.mass())
        + gas.mean_field_coefficient() * n_local
        + gas.thermal_bath_shift(temperature)
        + gas.trap_energy(r)
}

/// z(r) = exp(β(μ − g·n − ε_b − mc²αr²)).
pub fn local_fugacity(gas: &GasSystem, state: &ThermalState, n_local: f64, r: f64) -> Result<f64> {
    let t = state.temperature;
    let exponent = state.beta(gas)
        * (state.chemical_potential
            - gas.mean_field_coefficient() * n_local
            - gas.thermal_bath_shift(t)
            - gas.trap_energy(r));
    let z = exponent.exp();
    if z > 1.0 + 1e-12 {
        return Err(Error::domain(format!(
            "local fugacity {z} exceeds 1: chemical potential above the semiclassical bound"
        )));
    }
    Ok(z.min(1.0))
}

/// μ_c = g·n(0) + ε_b(T).
pub fn critical_chemical_potential(gas: &GasSystem, temperature: f64, n_center: f64) -> Result<f64> {
    if !(n_center >= 0.0) {
        return Err(Error::non_physical(format!(
            "central density must be >= 0, got {n_center}"
        )));
    }
    Ok(gas.mean_field_coefficient() * n_center + gas.thermal_bath_shift(temperature))
}

/// Dimensionless description of one isotherm. With ρ = r/ℓ and
/// w = β(μ − ε_b), the local fugacity is exp(w − ρ² − s·n/n_Q).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Isotherm {
    pub beta: f64,
    pub n_q: f64,
    /// s = βg·n_Q
    pub coupling: f64,
    /// ℓ = (k_BT/(mc²α))^{1/2}
    pub length: f64,
    /// ε_b when the bath is kept, else 0.
    pub bath_shift: f64,
}

impl Isotherm {
    pub fn new(gas: &GasSystem, temperature: f64, thermal_bath: bool) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::non_physical(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !(gas.alpha() > 0.0) {
            return Err(Error::domain("the trap stiffness alpha must be positive"));
        }
        let kt = gas.constants().kb * temperature;
        let n_q = quantum_concentration(gas, temperature);
        Ok(Isotherm {
            beta: 1.0 / kt,
            n_q,
            coupling: gas.mean_field_coefficient() * n_q / kt,
            length: (kt / (gas.rest_energy() * gas.alpha())).sqrt(),
            bath_shift: if thermal_bath {
                gas.thermal_bath_shift(temperature)
            } else {
                0.0
            },
        })
    }

    pub fn reduced_mu(&self, mu: f64) -> f64 {
        self.beta * (mu - self.bath_shift)
    }

    pub fn mu_from_reduced(&self, w: f64) -> f64 {
        w / self.beta + self.bath_shift
    }

    /// The reduced chemical potential at which the centre fugacity reaches 1.
    pub fn critical_reduced_mu(&self) -> f64 {
        self.coupling * ZETA_3_2
    }
}
