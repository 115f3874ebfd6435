//! T_c^SB expressed through T_r = T_c/T_0, by eliminating λ between
//! k_BT_c^SB = 2mc²/√λ and the condensation shift.

use std::f64::consts::PI;

use super::condensation::theta_constant;
use super::FormulaMode;
use crate::error::{Error, Result};
use crate::units::{harmonic_length, GasSystem};

/// Constant printed in the harmonic-trap form of the relation.
pub const PRINTED_HARMONIC_CONSTANT: f64 = 5.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationReport {
    /// (1 − T_r)⁻¹ (κ⁻¹α^{1/8}/k_B)(mc/2πħ)^{5/4}·2Θ·N^{1/12} (K)
    pub general: f64,
    /// (1 − T_r)⁻¹ (mcκ⁻¹/ħk_B)(5.2/(8πa_ho))^{1/2} N^{1/12} (K)
    pub harmonic: f64,
    /// general / harmonic; depends on neither N nor κ.
    pub ratio: f64,
    /// The constant that would replace 5.2 for the two forms to agree.
    pub harmonic_constant: f64,
    /// 2mc²(KΘ)^{1/2}N^{1/12}/(k_Bκ(1 − T_r)^{1/2}) with
    /// K = α^{1/4}m^{1/2}/(c^{3/2}ħ^{5/2}): the exact elimination of λ.
    pub consistent: f64,
}

pub fn tsb_tc_relation(gas: &GasSystem, t_ratio: f64, mode: FormulaMode) -> Result<RelationReport> {
    if t_ratio == 1.0 {
        return Err(Error::Pole);
    }
    if !(t_ratio < 1.0 && t_ratio > 0.0) {
        return Err(Error::domain(format!("T_c/T_0 must lie in (0, 1), got {t_ratio}")));
    }
    if !(gas.kappa() > 0.0) {
        return Err(Error::domain("the relation needs kappa > 0"));
    }
    let k = gas.constants();
    let m = gas.mass();
    let n = gas.particle_number();
    let inv_kappa = 1.0 / gas.kappa();
    let pole = 1.0 / (1.0 - t_ratio);
    let theta = theta_constant(mode)?;

    let general = pole * inv_kappa * gas.alpha().powf(0.125) / k.kb
        * (m * k.c / (2.0 * PI * k.hbar)).powf(1.25)
        * 2.0
        * theta
        * n.powf(1.0 / 12.0);

    let a_ho = harmonic_length(gas)?;
    let prefactor = pole * m * k.c * inv_kappa / (k.hbar * k.kb) * n.powf(1.0 / 12.0);
    let harmonic = prefactor * (PRINTED_HARMONIC_CONSTANT / (8.0 * PI * a_ho)).sqrt();
    let harmonic_constant = 8.0 * PI * a_ho * (general / prefactor).powi(2);

    let big_k = gas.alpha().powf(0.25) * m.sqrt() / (k.c.powf(1.5) * k.hbar.powf(2.5));
    let consistent = 2.0 * gas.rest_energy() * (big_k * theta).sqrt() * n.powf(1.0 / 12.0) * inv_kappa
        / (k.kb * (1.0 - t_ratio).sqrt());

    Ok(RelationReport {
        general,
        harmonic,
        ratio: general / harmonic,
        harmonic_constant,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::super::condensation::condensation_shift;
    use super::super::tests::rb87;
    use super::*;
    use crate::field::symmetry_breaking_temperature;

    #[test]
    fn pole_and_domain() {
        let gas = rb87(5.77e-9);
        assert_eq!(tsb_tc_relation(&gas, 1.0, FormulaMode::PaperVerbatim), Err(Error::Pole));
        assert!(tsb_tc_relation(&gas, 1.2, FormulaMode::PaperVerbatim).is_err());
        let near = tsb_tc_relation(&gas, 1.0 - 1e-12, FormulaMode::PaperVerbatim).unwrap();
        let far = tsb_tc_relation(&gas, 0.5, FormulaMode::PaperVerbatim).unwrap();
        assert!(near.general > 1e10 * far.general);
    }

    #[test]
    fn particle_number_scaling() {
        let gas = rb87(5.77e-9);
        let more = gas.with_particle_number(16.0 * gas.particle_number()).unwrap();
        let a = tsb_tc_relation(&gas, 0.9, FormulaMode::PaperVerbatim).unwrap();
        let b = tsb_tc_relation(&more, 0.9, FormulaMode::PaperVerbatim).unwrap();
        let expected = 16f64.powf(1.0 / 12.0);
        assert!((b.general / a.general - expected).abs() < 1e-12);
        assert!((b.harmonic / a.harmonic - expected).abs() < 1e-12);
        assert!((b.consistent / a.consistent - expected).abs() < 1e-12);
        assert!((b.ratio - a.ratio).abs() < 1e-12 * a.ratio);
    }

    #[test]
    fn ratio_matches_closed_form() {
        let gas = rb87(5.77e-9);
        let r = tsb_tc_relation(&gas, 0.99, FormulaMode::PaperVerbatim).unwrap();
        let theta = theta_constant(FormulaMode::PaperVerbatim).unwrap();
        let expected = 2f64.powf(0.875) * (2.0 * PI).powf(-1.25) * theta / (5.2 / (8.0 * PI)).sqrt();
        assert!((r.ratio - expected).abs() < 1e-12 * expected);
        let c = 8.0 * PI * (2f64.powf(0.875) * (2.0 * PI).powf(-1.25) * theta).powi(2);
        assert!((r.harmonic_constant - c).abs() < 1e-12 * c);
    }

    #[test]
    fn consistent_form_inverts_the_shift() {
        for mode in FormulaMode::ALL {
            let gas = rb87(5.77e-9);
            let t_ratio = 1.0 + condensation_shift(&gas, mode).unwrap();
            let r = tsb_tc_relation(&gas, t_ratio, mode).unwrap();
            let t_sb = symmetry_breaking_temperature(&gas, 0.0).unwrap().value();
            assert!((r.consistent - t_sb).abs() < 1e-9 * t_sb, "{} vs {t_sb}", r.consistent);
        }
    }
}
