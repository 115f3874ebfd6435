//! Bose–Einstein functions, the Riemann zeta function and the double sum
//! G_{3/2}(z) that enters the first-order interaction correction.

mod bose;
mod double_sum;
mod zeta;

pub use bose::{
    bose_function, bose_function_integral, bose_function_log, scaled_half_order, SeriesAccuracy, DIVERGENT_ORDER_GUARD,
};
pub use double_sum::{g_double_sum, g_double_sum_detailed, triangle_partial_sum, DoubleSumEstimate};
pub use zeta::{zeta, zeta_tail};

use crate::error::{Error, Result};

/// Relative residual of z·∂g_ν/∂z = g_{ν−1}, with the derivative taken by a
/// central difference of step 1e-6·z.
pub fn check_derivative_identity(nu: f64, z: f64) -> Result<f64> {
    if !(nu > 1.0) {
        return Err(Error::domain(format!("identity check needs nu > 1, got {nu}")));
    }
    let h = 1e-6 * z;
    if !(z > 0.0 && z + h < 1.0) {
        return Err(Error::domain(format!("z must be interior to (0, 1), got {z}")));
    }
    let acc = SeriesAccuracy::TIGHT;
    let up = bose_function(nu, z + h, &acc)?;
    let down = bose_function(nu, z - h, &acc)?;
    let lhs = z * (up - down) / (2.0 * h);
    let rhs = bose_function(nu - 1.0, z, &acc)?;
    Ok((lhs - rhs).abs() / rhs)
}
