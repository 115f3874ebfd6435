//! Fixtures shared by the benchmarks.

use std::f64::consts::PI;

use bosecrit::scale::RB87_MASS;
use bosecrit::{GasParameters, GasSystem, PhysicalConstants};

/// Rb-87, N = 1e5, 100 Hz trap, κ = 3e39, a = 5.77 nm.
pub fn rb87() -> GasSystem {
    GasParameters {
        mass: RB87_MASS,
        particle_number: 1e5,
        kappa: Some(3e39),
        scattering_length: Some(5.77e-9),
        omega0: Some(2.0 * PI * 100.0),
        ..Default::default()
    }
    .validate(&PhysicalConstants::CODATA)
    .expect("fixture parameters are valid")
}

/// `points` radii evenly spaced on [0, r_max].
pub fn radial_grid(r_max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| r_max * i as f64 / (points - 1) as f64).collect()
}
