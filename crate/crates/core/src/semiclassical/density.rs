//! Self-consistent Hartree–Fock density n = n_Q g_{3/2}(z(r; n)) and its
//! first-order expansion in the coupling.

use rayon::prelude::*;

use super::{FormulaMode, Isotherm, ThermalState, ZETA_3_2};
use crate::error::{Error, Result};
use crate::specialfn::{bose_function_log, scaled_half_order, SeriesAccuracy, DIVERGENT_ORDER_GUARD};
use crate::units::GasSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityMethod {
    /// Newton iteration in u = (−ln z)^{1/2}, kept inside a bisection bracket.
    SafeguardedNewton,
    /// n ← (1 − d)·n + d·n_Q g_{3/2}(z(n)).
    DampedFixedPoint { damping: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySolverOptions {
    pub method: DensityMethod,
    pub max_iterations: usize,
    /// Stop once successive densities differ by at most this fraction.
    pub rel_tol: f64,
}

impl Default for DensitySolverOptions {
    fn default() -> Self {
        DensitySolverOptions {
            method: DensityMethod::SafeguardedNewton,
            max_iterations: 200,
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSolution {
    /// n/n_Q = g_{3/2}(z)
    pub reduced_density: f64,
    /// −ln z at the solution
    pub log_fugacity: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    /// r (m)
    pub radii: Vec<f64>,
    /// n(r) (m⁻³)
    pub density: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations: Vec<usize>,
}

impl DensityProfile {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

fn g32(x: f64) -> Result<f64> {
    bose_function_log(1.5, x, &SeriesAccuracy::TIGHT)
}

/// Solves y = offset + s·g_{3/2}(e^{−y}) for y = −ln z ≥ 0, where
/// offset = ρ² − w is the local distance below the band edge in units of
/// k_BT and s = βg·n_Q. Returns n/n_Q.
pub fn solve_reduced_density(coupling: f64, offset: f64, opts: &DensitySolverOptions) -> Result<PointSolution> {
    if !(coupling >= 0.0 && coupling.is_finite()) || offset.is_nan() {
        return Err(Error::domain("density solver needs s >= 0 and a finite offset"));
    }
    let mut slack = offset + coupling * ZETA_3_2;
    if slack < 0.0 {
        // μ computed as μ_c can land a rounding error above it
        let scale = offset.abs().max(coupling * ZETA_3_2);
        if slack >= -1e-12 * scale {
            slack = 0.0;
        } else {
            return Err(Error::domain(format!(
                "chemical potential above the semiclassical bound (excess {:e} k_BT)",
                -slack
            )));
        }
    }
    if coupling == 0.0 {
        let y = offset.max(0.0);
        return Ok(PointSolution {
            reduced_density: g32(y)?,
            log_fugacity: y,
            iterations: 1,
            converged: true,
        });
    }
    if slack == 0.0 {
        return Ok(PointSolution {
            reduced_density: ZETA_3_2,
            log_fugacity: 0.0,
            iterations: 1,
            converged: true,
        });
    }
    match opts.method {
        DensityMethod::SafeguardedNewton => newton(coupling, offset, slack, opts),
        DensityMethod::DampedFixedPoint { damping } => fixed_point(coupling, offset, damping, opts),
    }
}

fn newton(s: f64, offset: f64, slack: f64, opts: &DensitySolverOptions) -> Result<PointSolution> {
    // F(u) = u² − offset − s·g_{3/2}(e^{−u²}) is increasing, F(lo) ≤ 0 ≤ F(hi)
    let mut lo = offset.max(0.0).sqrt();
    let mut hi = slack.sqrt();
    let mut u = 0.5 * (lo + hi);
    let mut q_prev = f64::NAN;
    for it in 1..=opts.max_iterations {
        let q = g32(u * u)?;
        let f = u * u - offset - s * q;
        if (q - q_prev).abs() <= opts.rel_tol * q || f == 0.0 || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(PointSolution {
                reduced_density: q,
                log_fugacity: u * u,
                iterations: it,
                converged: true,
            });
        }
        q_prev = q;
        if f < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let slope = 2.0 * u + 2.0 * s * scaled_half_order(u)?;
        let step = u - f / slope;
        u = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
    }
    Ok(PointSolution {
        reduced_density: g32(u * u)?,
        log_fugacity: u * u,
        iterations: opts.max_iterations,
        converged: false,
    })
}

fn fixed_point(s: f64, offset: f64, damping: f64, opts: &DensitySolverOptions) -> Result<PointSolution> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::domain(format!("damping must lie in (0, 1], got {damping}")));
    }
    let mut q = g32(offset.max(0.0))?;
    for it in 1..=opts.max_iterations {
        let y = (offset + s * q).max(0.0);
        let next = (1.0 - damping) * q + damping * g32(y)?;
        if (next - q).abs() <= opts.rel_tol * next {
            return Ok(PointSolution {
                reduced_density: next,
                log_fugacity: (offset + s * next).max(0.0),
                iterations: it,
                converged: true,
            });
        }
        q = next;
    }
    Ok(PointSolution {
        reduced_density: q,
        log_fugacity: (offset + s * q).max(0.0),
        iterations: opts.max_iterations,
        converged: false,
    })
}

/// n(r) on a radial grid. Points are independent and solved in parallel;
/// points that fail to converge are flagged rather than reported as errors.
pub fn self_consistent_density(
    gas: &GasSystem,
    state: &ThermalState,
    grid: &[f64],
    opts: &DensitySolverOptions,
) -> Result<DensityProfile> {
    let iso = Isotherm::new(gas, state.temperature, true)?;
    if let Some(r) = grid.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
        return Err(Error::domain(format!("grid radius must be finite and >= 0, got {r}")));
    }
    let w = iso.reduced_mu(state.chemical_potential);
    let solutions: Vec<PointSolution> = grid
        .par_iter()
        .map(|&r| {
            let rho = r / iso.length;
            solve_reduced_density(iso.coupling, rho * rho - w, opts)
        })
        .collect::<Result<_>>()?;
    Ok(DensityProfile {
        radii: grid.to_vec(),
        density: solutions.iter().map(|p| iso.n_q * p.reduced_density).collect(),
        converged: solutions.iter().map(|p| p.converged).collect(),
        iterations: solutions.iter().map(|p| p.iterations).collect(),
    })
}

/// n(r) expanded to first order in λ around the ideal-gas density
/// n₀ = n_Q g_{3/2}(z₀), z₀ = exp(β(μ − mc²αr²)).
///
/// Derived-consistent: n ≈ n₀ − n_Q g_{1/2}(z₀)·β(g·n₀ + ε_b).
/// Paper-verbatim: the printed bracket, which carries an extra factor m and
/// a different thermal-bath term.
pub fn first_order_density(gas: &GasSystem, state: &ThermalState, r: f64, mode: FormulaMode) -> Result<f64> {
    let iso = Isotherm::new(gas, state.temperature, false)?;
    let beta = iso.beta;
    let x = beta * (gas.trap_energy(r) - state.chemical_potential);
    if !(x >= 0.0) {
        return Err(Error::domain("first-order density needs mu <= trap energy (z0 <= 1)"));
    }
    let n0 = iso.n_q * g32(x)?;
    if gas.lambda() == 0.0 || n0 == 0.0 {
        return Ok(n0);
    }
    if -(-x).exp_m1() < DIVERGENT_ORDER_GUARD {
        return Err(Error::domain(
            "g_1/2 diverges: z0 too close to 1 for the first-order density",
        ));
    }
    let g12 = bose_function_log(0.5, x, &SeriesAccuracy::TIGHT)?;
    let g32v = n0 / iso.n_q;
    let correction = match mode {
        FormulaMode::DerivedConsistent => {
            iso.n_q * g12 * beta * (gas.mean_field_coefficient() * n0 + gas.thermal_bath_shift(state.temperature))
        }
        FormulaMode::PaperVerbatim => {
            let k = gas.constants();
            let m = gas.mass();
            let kt = k.kb * state.temperature;
            let hbar2 = k.hbar * k.hbar;
            let pi = std::f64::consts::PI;
            let mean_field =
                gas.coupling_over_kappa_sq() * kt * kt / (4.0 * k.c * k.c) * (m / (pi * hbar2)).powi(3) * g32v;
            let bath =
                gas.lambda() * (kt.powi(5) * m / (32.0 * pi.powi(3) * hbar2.powi(3) * k.c.powi(4))).sqrt() * g32v / g12;
            g12 * mean_field - g12 * bath
        }
    };
    Ok(n0 - correction)
}

#[cfg(test)]
mod tests {
    use super::super::tests::rb87;
    use super::super::{critical_chemical_potential, local_fugacity, quantum_concentration};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ideal_gas_is_closed_form_in_one_step() {
        let gas = rb87(0.0);
        let t = 1e-7;
        let state = ThermalState::new(t, -2e-31).unwrap();
        let grid = [0.0, 1e-6, 5e-6, 2e-5];
        let p = self_consistent_density(&gas, &state, &grid, &DensitySolverOptions::default()).unwrap();
        for (i, &r) in grid.iter().enumerate() {
            let n0 = first_order_density(&gas, &state, r, FormulaMode::DerivedConsistent).unwrap();
            assert_eq!(p.iterations[i], 1);
            assert!((p.density[i] - n0).abs() <= 1e-14 * n0);
        }

        let at_zero = ThermalState::new(t, 0.0).unwrap();
        let centre = self_consistent_density(&gas, &at_zero, &[0.0], &DensitySolverOptions::default()).unwrap();
        let expected = quantum_concentration(&gas, t) * ZETA_3_2;
        assert!((centre.density[0] - expected).abs() < 1e-14 * expected);
    }

    #[test]
    fn critical_centre_has_unit_fugacity() {
        let gas = rb87(5.77e-9);
        let t = 1e-7;
        let n_centre = quantum_concentration(&gas, t) * ZETA_3_2;
        let mu_c = critical_chemical_potential(&gas, t, n_centre).unwrap();
        let state = ThermalState::new(t, mu_c).unwrap();
        let p = self_consistent_density(&gas, &state, &[0.0, 1e-6], &DensitySolverOptions::default()).unwrap();
        assert!((p.density[0] - n_centre).abs() < 1e-12 * n_centre);
        assert!(p.all_converged());
        let z = local_fugacity(&gas, &state, p.density[1], 1e-6).unwrap();
        assert!(z < 1.0);
    }

    #[test]
    fn rejects_chemical_potential_above_bound() {
        let gas = rb87(5.77e-9);
        let t = 1e-7;
        let mu_c = critical_chemical_potential(&gas, t, quantum_concentration(&gas, t) * ZETA_3_2).unwrap();
        let state = ThermalState::new(t, 1.01 * mu_c).unwrap();
        assert!(self_consistent_density(&gas, &state, &[0.0], &DensitySolverOptions::default()).is_err());
    }

    #[test]
    fn damped_iteration_agrees_when_it_converges() {
        let damped = DensitySolverOptions {
            method: DensityMethod::DampedFixedPoint { damping: 0.5 },
            max_iterations: 500,
            rel_tol: 1e-13,
        };
        let newton = DensitySolverOptions {
            rel_tol: 1e-13,
            ..Default::default()
        };
        for offset in [0.3, 1.0, 4.0] {
            let a = solve_reduced_density(0.2, offset, &damped).unwrap();
            let b = solve_reduced_density(0.2, offset, &newton).unwrap();
            assert!(a.converged && b.converged);
            assert!((a.reduced_density - b.reduced_density).abs() < 1e-11 * b.reduced_density);
        }
    }

    #[test]
    fn damped_iteration_stalls_near_unit_fugacity() {
        // at the critical centre s·g_{1/2} is unbounded and a fixed 0.5
        // damping overshoots; Newton in u does not care
        let damped = DensitySolverOptions {
            method: DensityMethod::DampedFixedPoint { damping: 0.5 },
            ..Default::default()
        };
        let s = 0.5;
        let offset = -s * ZETA_3_2 + 1e-6;
        let a = solve_reduced_density(s, offset, &damped).unwrap();
        let b = solve_reduced_density(s, offset, &DensitySolverOptions::default()).unwrap();
        assert!(b.converged);
        assert!(!a.converged || (a.reduced_density - b.reduced_density).abs() > 1e-10 * b.reduced_density);
    }

    #[test]
    fn first_order_limits() {
        let gas = rb87(5.77e-9);
        let state = ThermalState::new(1e-7, -1e-31).unwrap();
        for mode in FormulaMode::ALL {
            assert_eq!(first_order_density(&gas, &state, 1.0, mode).unwrap(), 0.0);
        }
        let ideal = rb87(0.0);
        let n = first_order_density(&ideal, &state, 0.0, FormulaMode::PaperVerbatim).unwrap();
        let n0 = quantum_concentration(&ideal, 1e-7) * g32(1e-31 / (ideal.constants().kb * 1e-7)).unwrap();
        assert!((n - n0).abs() < 1e-14 * n0);

        let edge = ThermalState::new(1e-7, 0.0).unwrap();
        assert!(first_order_density(&gas, &edge, 0.0, FormulaMode::DerivedConsistent).is_err());
    }

    /// Residual of the first-order density against the exact solution for a
    /// given scattering length.
    fn residual(a: f64, mode: FormulaMode) -> f64 {
        let gas = rb87(a);
        let t = 1e-7;
        let kt = gas.constants().kb * t;
        let state = ThermalState::new(t, -0.3 * kt).unwrap();
        let r = 3e-6;
        let exact = self_consistent_density(
            &gas,
            &state,
            &[r],
            &DensitySolverOptions {
                rel_tol: 1e-15,
                ..Default::default()
            },
        )
        .unwrap()
        .density[0];
        (first_order_density(&gas, &state, r, mode).unwrap() - exact).abs() / exact
    }

    #[test]
    fn first_order_residual_is_second_order() {
        let a = 2e-9;
        let coarse = residual(a, FormulaMode::DerivedConsistent);
        let fine = residual(a / 2.0, FormulaMode::DerivedConsistent);
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.2, "residual ratio {ratio}");
    }

    #[test]
    fn printed_first_order_density_is_only_zeroth_order() {
        // the printed correction has the wrong size, so halving λ only halves
        // the residual
        let a = 2e-9;
        let ratio = residual(a, FormulaMode::PaperVerbatim) / residual(a / 2.0, FormulaMode::PaperVerbatim);
        assert!((ratio - 2.0).abs() < 0.2, "residual ratio {ratio}");
    }

    proptest! {
        #[test]
        fn profile_is_non_negative_and_decreasing(
            a in 0.0f64..2e-8,
            mu_frac in 0.0f64..1.0,
            t in 5e-8f64..5e-7,
        ) {
            let gas = rb87(a);
            let n_centre = quantum_concentration(&gas, t) * ZETA_3_2;
            let mu_c = critical_chemical_potential(&gas, t, n_centre).unwrap();
            let kt = gas.constants().kb * t;
            let mu = mu_c - mu_frac * kt;
            let state = ThermalState::new(t, mu).unwrap();
            let grid: Vec<f64> = (0..40).map(|i| i as f64 * 1e-6).collect();
            let p = self_consistent_density(&gas, &state, &grid, &DensitySolverOptions::default()).unwrap();
            prop_assert!(p.all_converged());
            for w in p.density.windows(2) {
                prop_assert!(w[0] >= 0.0 && w[1] >= 0.0);
                prop_assert!(w[1] <= w[0]);
            }
            for (n, r) in p.density.iter().zip(&grid) {
                prop_assert!(local_fugacity(&gas, &state, *n, *r).unwrap() <= 1.0);
            }
        }
    }
}
