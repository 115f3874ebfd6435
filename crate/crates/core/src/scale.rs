//! The scale κ linking |Φ|² to the particle density, estimated from the
//! healing length ξ via ħ²/(2mξ²) = μ and μ = μ_c.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::units::{coupling_from_scale, Dim, PhysicalConstants};

/// Mass of ⁸⁷Rb (kg).
pub const RB87_MASS: f64 = 1.443_160_648e-25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HealingInput {
    /// ξ (m)
    pub healing_length: f64,
    /// a (m)
    pub scattering_length: f64,
    /// n(0) (m⁻³)
    pub central_density: f64,
    /// T_c (K)
    pub tc: f64,
    /// m (kg); only used for the implied chemical potential.
    pub mass: f64,
}

impl HealingInput {
    /// ξ = 0.4 μm, a = 5.77 nm, n = 10¹⁹ m⁻³, T_c = 200 nK for ⁸⁷Rb. The
    /// scattering length is read as nanometres; in centimetres the radicand
    /// is negative.
    pub fn rb87_paper() -> Self {
        HealingInput {
            healing_length: 0.4e-6,
            scattering_length: 5.77e-9,
            central_density: 1e19,
            tc: 200e-9,
            mass: RB87_MASS,
        }
    }

    pub fn with_density(self, central_density: f64) -> Self {
        HealingInput {
            central_density,
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("healing length", self.healing_length),
            ("scattering length", self.scattering_length),
            ("central density", self.central_density),
            ("T_c", self.tc),
            ("mass", self.mass),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::non_physical(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// n* = ξ⁻²/(16πa), where the κ radicand changes sign.
    pub fn critical_density(&self) -> f64 {
        1.0 / (self.healing_length * self.healing_length * 16.0 * PI * self.scattering_length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEstimate {
    /// κ (J⁻¹·m⁻³ᐟ²)
    pub kappa: f64,
    /// λ = 16πħ²c²κ²a
    pub lambda: f64,
    /// μ = ħ²/(2mξ²) (J)
    pub mu: f64,
}

/// ξ = ħ/√(2mμ).
pub fn healing_length_from_mu(constants: &PhysicalConstants, mass: f64, mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::domain(format!("chemical potential must be positive, got {mu}")));
    }
    if !(mass > 0.0) {
        return Err(Error::non_physical(format!("mass must be positive, got {mass}")));
    }
    Ok(constants.hbar / (2.0 * mass * mu).sqrt())
}

/// μ = ħ²/(2mξ²).
pub fn mu_from_healing_length(constants: &PhysicalConstants, mass: f64, xi: f64) -> f64 {
    constants.hbar * constants.hbar / (2.0 * mass * xi * xi)
}

/// ξ = ħc/√(λ(κ⁻²n + (k_BT_c)²/2)).
pub fn healing_length_from_density(
    constants: &PhysicalConstants,
    lambda: f64,
    kappa: f64,
    density: f64,
    tc: f64,
) -> Result<f64> {
    if !(lambda > 0.0 && kappa > 0.0) {
        return Err(Error::domain("healing length needs lambda > 0 and kappa > 0"));
    }
    let kt = constants.kb * tc;
    Ok(constants.hbar * constants.c / (lambda * (density / (kappa * kappa) + 0.5 * kt * kt)).sqrt())
}

/// κ = ((ξ⁻² − 16πan)/(8πa(k_BT_c)²))^{1/2}.
pub fn kappa_from_healing(constants: &PhysicalConstants, input: &HealingInput) -> Result<KappaEstimate> {
    input.validate()?;
    let a = input.scattering_length;
    let xi = input.healing_length;
    let radicand = 1.0 / (xi * xi) - 16.0 * PI * a * input.central_density;
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand {
            critical_density: input.critical_density(),
        });
    }
    let kt = constants.kb * input.tc;
    let kappa = (radicand / (8.0 * PI * a * kt * kt)).sqrt();
    Ok(KappaEstimate {
        kappa,
        lambda: coupling_from_scale(constants, kappa, a),
        mu: mu_from_healing_length(constants, input.mass, xi),
    })
}

/// κ(n) over a list of densities, evaluated in parallel, in input order.
pub fn kappa_sweep(
    constants: &PhysicalConstants,
    input: &HealingInput,
    densities: &[f64],
) -> Vec<(f64, Result<KappaEstimate>)> {
    densities
        .par_iter()
        .map(|&n| (n, kappa_from_healing(constants, &input.with_density(n))))
        .collect()
}

/// `points` log-spaced values from `start` to `end` inclusive.
pub fn log_spaced(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (l0, l1) = (start.ln(), end.ln());
            (0..points)
                .map(|i| {
                    if i == 0 {
                        start
                    } else if i == points - 1 {
                        end
                    } else {
                        (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Dimensions of the κ expression: (m⁻² / (m·J²))^{1/2}.
pub fn kappa_dimension() -> Option<Dim> {
    (Dim::M.powi(-2) / (Dim::M * Dim::J * Dim::J)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SI: PhysicalConstants = PhysicalConstants::CODATA;

    #[test]
    fn healing_length_examples() {
        let unit = PhysicalConstants::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(healing_length_from_mu(&unit, 0.5, 1.0).unwrap(), 1.0);
        let a = healing_length_from_mu(&SI, RB87_MASS, 1e-31).unwrap();
        let b = healing_length_from_mu(&SI, RB87_MASS, 4e-31).unwrap();
        assert!((a / b - 2.0).abs() < 1e-15);
        assert!(healing_length_from_mu(&SI, RB87_MASS, 0.0).is_err());
    }

    #[test]
    fn healing_length_round_trips_through_kappa() {
        let input = HealingInput::rb87_paper();
        let est = kappa_from_healing(&SI, &input).unwrap();
        let xi = healing_length_from_density(&SI, est.lambda, est.kappa, input.central_density, input.tc).unwrap();
        assert!((xi - input.healing_length).abs() < 1e-12 * input.healing_length);
        let back = healing_length_from_mu(&SI, input.mass, est.mu).unwrap();
        assert!((back - input.healing_length).abs() < 1e-12 * input.healing_length);
    }

    #[test]
    fn rb87_order_of_magnitude() {
        let est = kappa_from_healing(&SI, &HealingInput::rb87_paper()).unwrap();
        assert!(est.kappa > 1e39 && est.kappa < 1e40, "{:e}", est.kappa);
    }

    #[test]
    fn centimetre_reading_has_negative_radicand() {
        let input = HealingInput {
            scattering_length: 5.77e-2,
            ..HealingInput::rb87_paper()
        };
        match kappa_from_healing(&SI, &input) {
            Err(Error::NegativeRadicand { critical_density }) => {
                assert!((critical_density - input.critical_density()).abs() < 1e-12 * critical_density)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vanishes_at_critical_density() {
        let input = HealingInput::rb87_paper();
        let at = input.with_density(input.critical_density());
        assert!(kappa_from_healing(&SI, &at).unwrap().kappa < 1e-6 * 1e39);
    }

    #[test]
    fn sweep_keeps_order() {
        let ns = log_spaced(1e19, 1e21, 21);
        assert_eq!(ns[0], 1e19);
        assert_eq!(ns[20], 1e21);
        let rows = kappa_sweep(&SI, &HealingInput::rb87_paper(), &ns);
        assert_eq!(rows.len(), 21);
        assert!(rows.iter().zip(&ns).all(|(row, n)| row.0 == *n));
        assert!(rows[0].1.is_ok());
        assert!(rows[20].1.is_err());
    }

    #[test]
    fn kappa_has_scale_dimension() {
        assert_eq!(kappa_dimension(), Some(Dim::kappa()));
    }

    proptest! {
        #[test]
        fn kappa_monotone(
            tc in 1e-8f64..1e-6,
            frac in 0.01f64..0.9,
            xi in 0.2e-6f64..2e-6,
        ) {
            let base = HealingInput { healing_length: xi, ..HealingInput::rb87_paper() };
            let n = frac * base.critical_density();
            let k = |i: HealingInput| kappa_from_healing(&SI, &i).unwrap().kappa;
            let here = base.with_density(n);
            let hotter = HealingInput { tc: 1.1 * tc, ..here };
            let cooler = HealingInput { tc, ..here };
            prop_assert!(k(hotter) < k(cooler));
            prop_assert!(k(here.with_density(1.05 * n)) < k(here));
            let shorter = HealingInput { healing_length: 0.95 * xi, ..here };
            prop_assert!(k(shorter) > k(here));
        }
    }
}
