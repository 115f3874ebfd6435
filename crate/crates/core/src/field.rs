//! One-loop thermal potential of a real self-interacting scalar field in an
//! external potential φ, its minima, and the temperature at which the
//! minimum at Φ = 0 turns into a maximum.
//!
//! V_T(Φ) = −(m²c²/2ħ²)Φ² + (λ/4ħ²c²)Φ⁴ + (λ/8ħ²c²)(k_BT)²Φ²
//!          − (π²/90ħ²c²)(k_BT)⁴ − (m²c²/ħ²) φ Φ²
//!
//! The (k_BT)⁴ term shifts the potential by a Φ-independent offset and is off
//! by default.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::GasSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPotentialInput {
    pub gas: GasSystem,
    /// Bath temperature T (K)
    pub temperature: f64,
    /// Dimensionless external potential φ at the evaluation point
    pub external_phi: f64,
    pub include_t4: bool,
}

impl FieldPotentialInput {
    pub fn new(gas: GasSystem, temperature: f64, external_phi: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::non_physical(format!(
                "temperature must be >= 0, got {temperature}"
            )));
        }
        if !(external_phi >= 0.0 && external_phi.is_finite()) {
            return Err(Error::non_physical(format!("phi must be >= 0, got {external_phi}")));
        }
        Ok(FieldPotentialInput {
            gas,
            temperature,
            external_phi,
            include_t4: false,
        })
    }

    pub fn with_t4(mut self, include: bool) -> Self {
        self.include_t4 = include;
        self
    }

    /// Coefficient of Φ² in V_T.
    fn quadratic(&self) -> f64 {
        let k = self.gas.constants();
        let hbar2 = k.hbar * k.hbar;
        let c2 = k.c * k.c;
        let m2c2 = self.gas.mass() * self.gas.mass() * c2;
        let kt = k.kb * self.temperature;
        -m2c2 / (2.0 * hbar2) + self.gas.lambda() * kt * kt / (8.0 * hbar2 * c2) - m2c2 * self.external_phi / hbar2
    }

    fn quartic(&self) -> f64 {
        let k = self.gas.constants();
        self.gas.lambda() / (4.0 * k.hbar * k.hbar * k.c * k.c)
    }
}

/// T_c^SB, which runs off to infinity in the ideal-gas limit λ → 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryBreakingTemperature {
    Finite(f64),
    Divergent,
}

impl SymmetryBreakingTemperature {
    pub fn value(&self) -> f64 {
        match self {
            SymmetryBreakingTemperature::Finite(t) => *t,
            SymmetryBreakingTemperature::Divergent => f64::INFINITY,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, SymmetryBreakingTemperature::Divergent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub t_sb: SymmetryBreakingTemperature,
    pub phi_min_plus: f64,
    pub phi_min_minus: f64,
    /// 1 + 2φ − λ(k_BT/2mc²)²; the symmetry is broken iff this is positive.
    pub radicand: f64,
    pub broken: bool,
}

pub fn potential_value(input: &FieldPotentialInput, field: f64) -> f64 {
    let f2 = field * field;
    let mut v = input.quadratic() * f2 + input.quartic() * f2 * f2;
    if input.include_t4 {
        let k = input.gas.constants();
        let kt = k.kb * input.temperature;
        v -= PI * PI * kt.powi(4) / (90.0 * k.hbar * k.hbar * k.c * k.c);
    }
    v
}

/// ∂²V_T/∂Φ² at Φ = 0.
pub fn curvature_at_origin(input: &FieldPotentialInput) -> f64 {
    2.0 * input.quadratic()
}

/// k_B T_c^SB = (2mc²/√λ)(1 + 2φ)^{1/2}
pub fn symmetry_breaking_temperature(gas: &GasSystem, external_phi: f64) -> Result<SymmetryBreakingTemperature> {
    if !(external_phi >= 0.0 && external_phi.is_finite()) {
        return Err(Error::non_physical(format!("phi must be >= 0, got {external_phi}")));
    }
    if gas.lambda() == 0.0 {
        return Ok(SymmetryBreakingTemperature::Divergent);
    }
    let kt = 2.0 * gas.rest_energy() / gas.lambda().sqrt() * (1.0 + 2.0 * external_phi).sqrt();
    Ok(SymmetryBreakingTemperature::Finite(kt / gas.constants().kb))
}

/// Φ_min = ±(mc²/√λ)(1 + 2φ − λ(k_BT/2mc²)²)^{1/2}, collapsing to 0 above T_c^SB.
pub fn minima(gas: &GasSystem, temperature: f64, external_phi: f64) -> Result<SymmetryReport> {
    if gas.lambda() <= 0.0 {
        return Err(Error::domain(
            "minima need lambda > 0; the free potential is unbounded below",
        ));
    }
    if !(temperature >= 0.0) {
        return Err(Error::non_physical(format!(
            "temperature must be >= 0, got {temperature}"
        )));
    }
    let t_sb = symmetry_breaking_temperature(gas, external_phi)?;
    let mc2 = gas.rest_energy();
    let ratio = gas.constants().kb * temperature / (2.0 * mc2);
    let radicand = 1.0 + 2.0 * external_phi - gas.lambda() * ratio * ratio;
    let broken = radicand > 0.0;
    let amplitude = if broken {
        mc2 / gas.lambda().sqrt() * radicand.sqrt()
    } else {
        0.0
    };
    Ok(SymmetryReport {
        t_sb,
        phi_min_plus: amplitude,
        phi_min_minus: -amplitude,
        radicand,
        broken,
    })
}

/// Relative gap between λk_B²T²/(8mc²) and (mc²/2)(T/T_c^SB)², the two
/// spellings of the thermal term in the non-relativistic field equation.
pub fn thermal_term_identity(gas: &GasSystem, temperature: f64) -> Result<f64> {
    if gas.lambda() <= 0.0 {
        return Err(Error::domain("thermal term identity needs lambda > 0"));
    }
    let mc2 = gas.rest_energy();
    let kt = gas.constants().kb * temperature;
    let direct = gas.lambda() * kt * kt / (8.0 * mc2);
    let t_sb = symmetry_breaking_temperature(gas, 0.0)?.value();
    let via_tsb = 0.5 * mc2 * (temperature / t_sb).powi(2);
    let scale = direct.abs().max(via_tsb.abs());
    Ok(if scale == 0.0 {
        0.0
    } else {
        (direct - via_tsb).abs() / scale
    })
}

/// Locates the positive minimum of V_T using potential evaluations only:
/// golden-section search, then bisection on the sign of V(Φ+h) − V(Φ−h).
/// Returns `None` when the curvature at the origin is non-negative.
pub fn numeric_minimum(input: &FieldPotentialInput) -> Option<f64> {
    if curvature_at_origin(input) >= 0.0 || input.quartic() <= 0.0 {
        return None;
    }
    let v = |f: f64| potential_value(input, f);
    // V' vanishes below sqrt(-2q/4p)·2
    let mut hi = 2.0 * (-input.quadratic() / (2.0 * input.quartic())).sqrt();
    let mut lo = 0.0;

    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (v(a), v(b));
    while hi - lo > 1e-4 * hi {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = v(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = v(b);
        }
    }

    let slope_sign = |f: f64| {
        let h = 1e-5 * f;
        v(f + h) - v(f - h)
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope_sign(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{GasParameters, PhysicalConstants};

    fn natural_gas(lambda: f64, mass: f64) -> GasSystem {
        GasParameters {
            mass,
            particle_number: 1e4,
            lambda: Some(lambda),
            kappa: Some(1.0),
            omega0: Some(1e-3),
            ..Default::default()
        }
        .validate(&PhysicalConstants::NATURAL)
        .unwrap()
    }

    #[test]
    fn tsb_closed_forms() {
        let gas = natural_gas(4.0, 3.0);
        assert_eq!(symmetry_breaking_temperature(&gas, 0.0).unwrap().value(), 3.0);
        assert_eq!(symmetry_breaking_temperature(&gas, 1.5).unwrap().value(), 6.0);
        let ideal = natural_gas(0.0, 3.0);
        assert!(symmetry_breaking_temperature(&ideal, 0.0).unwrap().is_divergent());
    }

    #[test]
    fn potential_closed_forms() {
        let gas = natural_gas(0.7, 2.0);
        let cold = FieldPotentialInput::new(gas, 0.0, 0.0).unwrap();
        assert_eq!(potential_value(&cold, 0.0), 0.0);
        let m = gas.mass();
        let phi_min = (m * m / gas.lambda()).sqrt();
        let expected = -m.powi(4) / (4.0 * gas.lambda());
        assert!((potential_value(&cold, phi_min) - expected).abs() < 1e-14 * expected.abs());
    }

    #[test]
    fn curvature_vanishes_at_tsb() {
        let gas = natural_gas(0.3, 1.0);
        let t_sb = symmetry_breaking_temperature(&gas, 0.0).unwrap().value();
        let at = FieldPotentialInput::new(gas, t_sb, 0.0).unwrap();
        assert!(curvature_at_origin(&at).abs() < 1e-14);
        // finite-difference curvature from potential evaluations
        let h = 1e-3;
        let fd = (potential_value(&at, h) - 2.0 * potential_value(&at, 0.0) + potential_value(&at, -h)) / (h * h);
        assert!(fd.abs() < 1e-5, "{fd}");
    }

    #[test]
    fn minima_closed_forms() {
        let gas = natural_gas(4.0, 1.0);
        let t_sb = symmetry_breaking_temperature(&gas, 0.0).unwrap().value();

        let at_tsb = minima(&gas, t_sb, 0.0).unwrap();
        assert_eq!(at_tsb.phi_min_plus, 0.0);
        assert!(!at_tsb.broken);

        let cold = minima(&gas, 0.0, 0.0).unwrap();
        assert_eq!(cold.phi_min_plus, 0.5);
        assert_eq!(cold.phi_min_minus, -0.5);

        let half = minima(&gas, 0.5 * t_sb, 0.0).unwrap();
        assert!((half.phi_min_plus - 0.5 * 0.75f64.sqrt()).abs() < 1e-15);
        assert!(half.broken);

        assert!(minima(&natural_gas(0.0, 1.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn thermal_identity() {
        let gas = natural_gas(4.0, 1.0);
        assert_eq!(thermal_term_identity(&gas, 0.0).unwrap(), 0.0);
        let t_sb = symmetry_breaking_temperature(&gas, 0.0).unwrap().value();
        let direct = gas.lambda() * t_sb * t_sb / 8.0;
        assert!((direct - 0.5).abs() < 1e-15);
        assert!(thermal_term_identity(&gas, t_sb).unwrap() < 1e-12);
    }

    #[test]
    fn numeric_minimum_tracks_closed_form() {
        let gas = natural_gas(0.5, 1.3);
        for frac in [0.0, 0.4, 0.9] {
            let t = frac * symmetry_breaking_temperature(&gas, 0.2).unwrap().value();
            let input = FieldPotentialInput::new(gas, t, 0.2).unwrap();
            let found = numeric_minimum(&input).unwrap();
            let exact = minima(&gas, t, 0.2).unwrap().phi_min_plus;
            assert!((found - exact).abs() < 1e-8 * exact, "{found} vs {exact}");
        }
        let hot = FieldPotentialInput::new(gas, 1e3, 0.0).unwrap();
        assert!(numeric_minimum(&hot).is_none());
    }
}
