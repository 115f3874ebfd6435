//! Symmetry-breaking temperature of a self-interacting scalar field in a
//! thermal bath, and the Bose–Einstein condensation temperature of the
//! corresponding harmonically trapped, weakly interacting gas.
//!
//! * [`units`]: constants, parameter validation, oscillator length
//! * [`specialfn`]: g_ν(z), ζ(ν), G_{3/2}(z)
//! * [`field`]: one-loop thermal potential, its minima, T_c^SB
//! * [`semiclassical`]: Hartree–Fock density, particle number, T_0, the
//!   condensation shift and a self-consistent numerical T_c
//! * [`scale`]: healing length and the κ estimate
//! * [`quadrature`]: adaptive Gauss–Kronrod integration

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod quadrature;
pub mod scale;
pub mod semiclassical;
pub mod specialfn;
pub mod units;

pub use error::{Error, Result};
pub use field::{FieldPotentialInput, SymmetryBreakingTemperature, SymmetryReport};
pub use scale::{HealingInput, KappaEstimate};
pub use semiclassical::{DensityProfile, FormulaMode, NumericOptions, TemperatureReport, ThermalState};
pub use specialfn::SeriesAccuracy;
pub use units::{GasParameters, GasSystem, PhysicalConstants};
