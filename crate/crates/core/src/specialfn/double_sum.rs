//! The double sum G_{3/2}(z) = Σ_{i,j≥1} z^{i+j} / (i^{1/2} j^{3/2} (i+j)^{3/2}).
//!
//! Summed along diagonals s = i + j. The diagonal weight
//! D(s) = Σ_{i=1}^{s−1} i^{−1/2} (s−i)^{−3/2} falls off only as ζ(3/2) s^{−1/2},
//! so at z = 1 the plain triangle i + j ≤ M misses about ζ(3/2)/M. The
//! remainder is therefore added back from the large-s expansion
//!
//!   D(s) ~ Σ_k c_k s^{−1/2−k},
//!   c_0 = ζ(3/2),  c_k = [(1/2)_k/k! + (3/2)_{k−1}/(k−1)!] ζ(3/2 − k),
//!
//! which turns the tail into Σ_k c_k Σ_{s>M} z^s s^{−2−k}. The radius M is
//! doubled until the corrected value and the first omitted term both sit below
//! the requested tolerance.

use super::bose::{bose_function, SeriesAccuracy};
use super::zeta::{zeta_real, zeta_tail};
use crate::error::{Error, Result};

const TAIL_TERMS: usize = 8;
const START_RADIUS: usize = 32;

/// Coefficient of D(s) ≤ BOUND·s^{−1/2}, from splitting the diagonal at s/2:
/// √2 ζ(3/2) + 4.
const DIAGONAL_BOUND: f64 = std::f64::consts::SQRT_2 * 2.612_375_348_685_488_4 + 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleSumEstimate {
    pub value: f64,
    /// Final truncation radius M (terms with i + j ≤ M summed explicitly).
    pub radius: usize,
    /// |value(M) − value(M/2)|
    pub change_on_doubling: f64,
    /// Size of the first tail-expansion term left out.
    pub remainder_estimate: f64,
    /// Rigorous bound on the part of the sum beyond the triangle,
    /// DIAGONAL_BOUND · Σ_{s>M} z^s s^{−2}.
    pub triangle_tail_bound: f64,
}

fn tail_coefficients() -> [f64; TAIL_TERMS + 1] {
    let mut c = [0.0; TAIL_TERMS + 1];
    c[0] = zeta_real(1.5);
    // (1/2)_k / k! and (3/2)_{k-1} / (k-1)!
    let mut half = 1.0;
    let mut three_half = 1.0;
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        half *= (0.5 + kf - 1.0) / kf;
        if k > 1 {
            three_half *= (1.5 + kf - 2.0) / (kf - 1.0);
        }
        *ck = (half + three_half) * zeta_real(1.5 - kf);
    }
    c
}

/// Σ_{s>M} z^s s^{−p}.
fn power_tail(z: f64, p: f64, m: usize) -> Result<f64> {
    if z == 1.0 {
        return Ok(zeta_tail(p, m as u64 + 1));
    }
    let log_z = z.ln();
    // geometric decay fast enough: sum forward
    if -log_z * 4096.0 > 40.0 {
        let mut total = 0.0;
        let mut s = m + 1;
        let mut zs = (s as f64 * log_z).exp();
        while zs > 0.0 {
            let term = zs * (s as f64).powf(-p);
            total += term;
            if term < 1e-19 * total.max(1e-300) {
                break;
            }
            zs *= z;
            s += 1;
        }
        return Ok(total);
    }
    let full = bose_function(p, z, &SeriesAccuracy::TIGHT)?;
    let mut head = 0.0;
    let mut zs = 1.0;
    for s in 1..=m {
        zs *= z;
        head += zs * (s as f64).powf(-p);
    }
    Ok(full - head)
}

struct Triangle {
    z: f64,
    inv_sqrt: Vec<f64>,
    inv_three_half: Vec<f64>,
    radius: usize,
    sum: f64,
}

impl Triangle {
    fn new(z: f64) -> Self {
        Triangle {
            z,
            inv_sqrt: vec![0.0],
            inv_three_half: vec![0.0],
            radius: 1,
            sum: 0.0,
        }
    }

    fn extend_to(&mut self, m: usize) {
        for n in self.inv_sqrt.len()..m {
            let nf = n as f64;
            self.inv_sqrt.push(1.0 / nf.sqrt());
            self.inv_three_half.push(1.0 / (nf * nf.sqrt()));
        }
        let mut zs = self.z.powi(self.radius as i32);
        for s in self.radius + 1..=m {
            zs *= self.z;
            if zs == 0.0 {
                break;
            }
            let diagonal: f64 = (1..s).map(|i| self.inv_sqrt[i] * self.inv_three_half[s - i]).sum();
            let sf = s as f64;
            self.sum += zs * diagonal / (sf * sf.sqrt());
        }
        self.radius = m;
    }
}

/// Explicit sum over the triangle i + j ≤ M, with no tail correction.
pub fn triangle_partial_sum(z: f64, m: usize) -> f64 {
    let mut t = Triangle::new(z);
    t.extend_to(m);
    t.sum
}

fn check_fugacity(z: f64) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::domain(format!("fugacity must lie in [0, 1], got {z}")))
    }
}

/// G_{3/2}(z) with the truncation diagnostics.
pub fn g_double_sum_detailed(z: f64, acc: &SeriesAccuracy) -> Result<DoubleSumEstimate> {
    check_fugacity(z)?;
    if z == 0.0 {
        return Ok(DoubleSumEstimate {
            value: 0.0,
            radius: 0,
            change_on_doubling: 0.0,
            remainder_estimate: 0.0,
            triangle_tail_bound: 0.0,
        });
    }
    let coefs = tail_coefficients();
    let mut triangle = Triangle::new(z);
    let mut evaluate = |m: usize| -> Result<(f64, f64, f64)> {
        triangle.extend_to(m);
        let mut tail = 0.0;
        for (k, c) in coefs[..TAIL_TERMS].iter().enumerate() {
            tail += c * power_tail(z, 2.0 + k as f64, m)?;
        }
        let omitted = (coefs[TAIL_TERMS] * power_tail(z, 2.0 + TAIL_TERMS as f64, m)?).abs();
        let bound = DIAGONAL_BOUND * power_tail(z, 2.0, m)?;
        Ok((triangle.sum + tail, omitted, bound))
    };

    let mut radius = START_RADIUS;
    let (mut previous, _, _) = evaluate(radius)?;
    loop {
        radius *= 2;
        if radius > acc.max_terms {
            return Err(Error::Convergence(format!(
                "G_3/2({z}) not settled at truncation radius {}",
                radius / 2
            )));
        }
        let (value, omitted, bound) = evaluate(radius)?;
        let change = (value - previous).abs();
        let tol = acc.target_rel_error * value.abs();
        if change <= tol && omitted <= tol {
            return Ok(DoubleSumEstimate {
                value,
                radius,
                change_on_doubling: change,
                remainder_estimate: omitted,
                triangle_tail_bound: bound,
            });
        }
        previous = value;
    }
}

pub fn g_double_sum(z: f64, acc: &SeriesAccuracy) -> Result<f64> {
    g_double_sum_detailed(z, acc).map(|e| e.value)
}
