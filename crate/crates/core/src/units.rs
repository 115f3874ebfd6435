//! Physical constants, gas parameters and the relations that tie them together.
//!
//! Everything is computed in SI. Natural units (c = ħ = k_B = 1) are reached by
//! overriding [`PhysicalConstants`] and rescaling the inputs with [`NaturalScale`].
//!
//! Two pairs of parameters are linked:
//!
//! * the self-coupling and the (scale, scattering length) pair, λ = 16π ħ²c² κ² a
//! * the trap stiffness and the trap frequency, α = ½ (ω₀/c)²
//!
//! [`GasParameters::validate`] fills whichever member of each pair is missing and
//! rejects pairs that disagree.

use std::f64::consts::PI;
use std::ops::{Div, Mul};

use crate::error::{Error, Result};

/// Relative tolerance used when both members of a linked pair are supplied.
pub const PAIR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light (m/s)
    pub c: f64,
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Boltzmann constant (J/K)
    pub kb: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 exact / recommended SI values.
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        c: 299_792_458.0,
        hbar: 1.054_571_817e-34,
        kb: 1.380_649e-23,
    };

    /// c = ħ = k_B = 1.
    pub const NATURAL: PhysicalConstants = PhysicalConstants {
        c: 1.0,
        hbar: 1.0,
        kb: 1.0,
    };

    pub fn new(c: f64, hbar: f64, kb: f64) -> Result<Self> {
        let constants = PhysicalConstants { c, hbar, kb };
        constants.check()?;
        Ok(constants)
    }

    fn check(&self) -> Result<()> {
        for (name, value) in [("c", self.c), ("hbar", self.hbar), ("kB", self.kb)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::non_physical(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Raw, possibly partial, description of the trapped gas.
///
/// At least one of `lambda` / (`kappa`, `scattering_length`) and one of
/// `alpha` / `omega0` must be present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GasParameters {
    /// Particle mass m (kg)
    pub mass: f64,
    /// Particle number N
    pub particle_number: f64,
    /// Dimensionless self-coupling λ
    pub lambda: Option<f64>,
    /// Scale κ (J⁻¹·m⁻³ᐟ²)
    pub kappa: Option<f64>,
    /// s-wave scattering length a (m)
    pub scattering_length: Option<f64>,
    /// Trap stiffness α (m⁻²)
    pub alpha: Option<f64>,
    /// Trap angular frequency ω₀ (rad/s)
    pub omega0: Option<f64>,
}

/// A validated, immutable parameter set with every linked member populated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasSystem {
    constants: PhysicalConstants,
    mass: f64,
    particle_number: f64,
    lambda: f64,
    kappa: f64,
    scattering_length: f64,
    alpha: f64,
    omega0: f64,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::non_physical(format!("{name} must be non-negative, got {value}")))
    }
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::non_physical(format!("{name} must be positive, got {value}")))
    }
}

/// λ = 16π ħ² c² κ² a
pub fn coupling_from_scale(constants: &PhysicalConstants, kappa: f64, scattering_length: f64) -> f64 {
    let hc = constants.hbar * constants.c;
    16.0 * PI * hc * hc * kappa * kappa * scattering_length
}

/// Inverts λ = 16π ħ² c² κ² a for κ at fixed a.
pub fn scale_from_coupling(constants: &PhysicalConstants, lambda: f64, scattering_length: f64) -> f64 {
    let hc = constants.hbar * constants.c;
    (lambda / (16.0 * PI * hc * hc * scattering_length)).sqrt()
}

/// α = ½ (ω₀/c)²
pub fn stiffness_from_frequency(constants: &PhysicalConstants, omega0: f64) -> f64 {
    let ratio = omega0 / constants.c;
    0.5 * ratio * ratio
}

pub fn frequency_from_stiffness(constants: &PhysicalConstants, alpha: f64) -> f64 {
    constants.c * (2.0 * alpha).sqrt()
}

impl GasParameters {
    pub fn validate(&self, constants: &PhysicalConstants) -> Result<GasSystem> {
        constants.check()?;
        let mass = positive("mass", self.mass)?;
        if !(self.particle_number.is_finite() && self.particle_number >= 1.0) {
            return Err(Error::non_physical(format!(
                "particle number must be >= 1, got {}",
                self.particle_number
            )));
        }

        let lambda = self.lambda.map(|v| non_negative("lambda", v)).transpose()?;
        let kappa = self.kappa.map(|v| non_negative("kappa", v)).transpose()?;
        let a = self
            .scattering_length
            .map(|v| non_negative("scattering length", v))
            .transpose()?;

        let (lambda, kappa, a) = match (lambda, kappa, a) {
            (lambda, Some(kappa), Some(a)) => {
                let derived = coupling_from_scale(constants, kappa, a);
                if let Some(given) = lambda {
                    if relative_gap(given, derived) > PAIR_TOLERANCE {
                        return Err(Error::InconsistentParameters(format!(
                            "lambda = {given:e} but 16 pi hbar^2 c^2 kappa^2 a = {derived:e}"
                        )));
                    }
                    (given, kappa, a)
                } else {
                    (derived, kappa, a)
                }
            }
            (Some(lambda), Some(kappa), None) => {
                if kappa > 0.0 {
                    let hc = constants.hbar * constants.c;
                    (lambda, kappa, lambda / (16.0 * PI * hc * hc * kappa * kappa))
                } else if lambda == 0.0 {
                    (0.0, 0.0, 0.0)
                } else {
                    return Err(Error::InconsistentParameters("kappa = 0 requires lambda = 0".into()));
                }
            }
            (Some(lambda), None, Some(a)) => {
                if a > 0.0 {
                    (lambda, scale_from_coupling(constants, lambda, a), a)
                } else if lambda == 0.0 {
                    (0.0, 0.0, 0.0)
                } else {
                    return Err(Error::InconsistentParameters("a = 0 requires lambda = 0".into()));
                }
            }
            (Some(0.0), None, None) => (0.0, 0.0, 0.0),
            (Some(_), None, None) => {
                return Err(Error::MissingParameter(
                    "lambda > 0 needs kappa or the scattering length to fix the density scale".into(),
                ))
            }
            (None, _, _) => {
                return Err(Error::MissingParameter(
                    "lambda or both kappa and the scattering length".into(),
                ))
            }
        };

        let alpha = self.alpha.map(|v| positive("alpha", v)).transpose()?;
        let omega0 = self.omega0.map(|v| positive("omega0", v)).transpose()?;
        let (alpha, omega0) = match (alpha, omega0) {
            (Some(alpha), Some(omega0)) => {
                let derived = stiffness_from_frequency(constants, omega0);
                if relative_gap(alpha, derived) > PAIR_TOLERANCE {
                    return Err(Error::InconsistentParameters(format!(
                        "alpha = {alpha:e} but (omega0/c)^2 / 2 = {derived:e}"
                    )));
                }
                (alpha, omega0)
            }
            (Some(alpha), None) => (alpha, frequency_from_stiffness(constants, alpha)),
            (None, Some(omega0)) => (stiffness_from_frequency(constants, omega0), omega0),
            (None, None) => {
                return Err(Error::MissingParameter("alpha or omega0".into()));
            }
        };

        Ok(GasSystem {
            constants: *constants,
            mass,
            particle_number: self.particle_number,
            lambda,
            kappa,
            scattering_length: a,
            alpha,
            omega0,
        })
    }
}

impl GasSystem {
    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn particle_number(&self) -> f64 {
        self.particle_number
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn scattering_length(&self) -> f64 {
        self.scattering_length
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Rest energy mc².
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.constants.c * self.constants.c
    }

    /// λκ⁻², the combination that multiplies the density in the mean-field
    /// energy. Zero for the ideal gas regardless of κ.
    pub fn coupling_over_kappa_sq(&self) -> f64 {
        if self.lambda == 0.0 {
            0.0
        } else {
            self.lambda / (self.kappa * self.kappa)
        }
    }

    /// Coefficient of n(r) in the single-particle energy, λκ⁻²/(2mc²) (J·m³).
    pub fn mean_field_coefficient(&self) -> f64 {
        self.coupling_over_kappa_sq() / (2.0 * self.rest_energy())
    }

    /// Thermal-bath energy shift λ(k_B T)²/(4mc²) (J).
    pub fn thermal_bath_shift(&self, temperature: f64) -> f64 {
        let kt = self.constants.kb * temperature;
        self.lambda * kt * kt / (4.0 * self.rest_energy())
    }

    /// Trap potential energy mc²αr² (J).
    pub fn trap_energy(&self, r: f64) -> f64 {
        self.rest_energy() * self.alpha * r * r
    }

    /// A copy with a different particle number.
    pub fn with_particle_number(&self, particle_number: f64) -> Result<GasSystem> {
        if !(particle_number.is_finite() && particle_number >= 1.0) {
            return Err(Error::non_physical(format!(
                "particle number must be >= 1, got {particle_number}"
            )));
        }
        Ok(GasSystem {
            particle_number,
            ..*self
        })
    }

    /// Back to a fully specified raw parameter set.
    pub fn to_parameters(&self) -> GasParameters {
        GasParameters {
            mass: self.mass,
            particle_number: self.particle_number,
            lambda: Some(self.lambda),
            kappa: Some(self.kappa),
            scattering_length: Some(self.scattering_length),
            alpha: Some(self.alpha),
            omega0: Some(self.omega0),
        }
    }
}

/// Oscillator length a_ho = (ħ/(mω₀))^{1/2}.
pub fn harmonic_length(gas: &GasSystem) -> Result<f64> {
    let m = positive("mass", gas.mass)?;
    let w = positive("omega0", gas.omega0)?;
    Ok((gas.constants.hbar / (m * w)).sqrt())
}

/// Rescaling between SI and natural units (c = ħ = k_B = 1) with a chosen
/// energy unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalScale {
    /// One natural energy unit, in joules.
    pub energy_unit: f64,
    pub si: PhysicalConstants,
}

impl NaturalScale {
    pub fn new(energy_unit: f64) -> Self {
        NaturalScale {
            energy_unit,
            si: PhysicalConstants::CODATA,
        }
    }

    /// Natural length unit ħc/E in metres.
    pub fn length_unit(&self) -> f64 {
        self.si.hbar * self.si.c / self.energy_unit
    }

    pub fn mass_to_natural(&self, kg: f64) -> f64 {
        kg * self.si.c * self.si.c / self.energy_unit
    }

    pub fn length_to_natural(&self, metres: f64) -> f64 {
        metres / self.length_unit()
    }

    pub fn frequency_to_natural(&self, rad_per_s: f64) -> f64 {
        rad_per_s * self.si.hbar / self.energy_unit
    }

    /// κ carries J⁻¹·m⁻³ᐟ².
    pub fn kappa_to_natural(&self, kappa: f64) -> f64 {
        kappa * self.energy_unit * self.length_unit().powf(1.5)
    }

    pub fn temperature_from_natural(&self, t: f64) -> f64 {
        t * self.energy_unit / self.si.kb
    }

    /// Rewrites an SI parameter set in natural units. λ and N are dimensionless
    /// and pass through.
    pub fn parameters_to_natural(&self, p: &GasParameters) -> GasParameters {
        GasParameters {
            mass: self.mass_to_natural(p.mass),
            particle_number: p.particle_number,
            lambda: p.lambda,
            kappa: p.kappa.map(|k| self.kappa_to_natural(k)),
            scattering_length: p.scattering_length.map(|a| self.length_to_natural(a)),
            alpha: p.alpha.map(|a| a * self.length_unit() * self.length_unit()),
            omega0: p.omega0.map(|w| self.frequency_to_natural(w)),
        }
    }
}

/// Dimension exponents over (kg, m, s, K), stored doubled so that the
/// half-integer powers of κ are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dim {
    twice: [i32; 4],
}

impl Dim {
    pub const NONE: Dim = Dim { twice: [0; 4] };
    pub const KG: Dim = Dim { twice: [2, 0, 0, 0] };
    pub const M: Dim = Dim { twice: [0, 2, 0, 0] };
    pub const S: Dim = Dim { twice: [0, 0, 2, 0] };
    pub const K: Dim = Dim { twice: [0, 0, 0, 2] };
    pub const J: Dim = Dim { twice: [2, 4, -4, 0] };

    pub fn powi(self, n: i32) -> Dim {
        Dim {
            twice: self.twice.map(|e| e * n),
        }
    }

    /// None when some exponent would become a quarter power.
    pub fn sqrt(self) -> Option<Dim> {
        if self.twice.iter().all(|e| e % 2 == 0) {
            Some(Dim {
                twice: self.twice.map(|e| e / 2),
            })
        } else {
            None
        }
    }

    pub fn recip(self) -> Dim {
        self.powi(-1)
    }

    pub fn is_dimensionless(self) -> bool {
        self == Dim::NONE
    }

    /// ħ
    pub fn action() -> Dim {
        Dim::J * Dim::S
    }
    /// c
    pub fn velocity() -> Dim {
        Dim::M / Dim::S
    }
    /// κ: J⁻¹·m⁻³ᐟ²
    pub fn kappa() -> Dim {
        Dim::J.recip() * Dim { twice: [0, -3, 0, 0] }
    }
}

impl Mul for Dim {
    type Output = Dim;
    // exponents add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dim) -> Dim {
        let mut twice = self.twice;
        for (e, r) in twice.iter_mut().zip(rhs.twice) {
            *e += r;
        }
        Dim { twice }
    }
}

impl Div for Dim {
    type Output = Dim;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Dim) -> Dim {
        self * rhs.recip()
    }
}
