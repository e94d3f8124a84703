use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::atomic::Species;
use crate::error::{Error, Result};

/// Floor on the electron wavenumber beyond the classical turning point, a.u.
pub const K_MIN: f64 = 1e-4;

/// |cos delta_p| below which an evaluation counts as on the p-wave resonance.
pub const RESONANCE_FLAG: f64 = 1e-3;

const TAN_P_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Classical,
    Clamped,
}

/// Local wavenumber of the Rydberg electron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronMomentum {
    pub k: f64,
    pub regime: Regime,
}

/// k from k^2/2 = E + 1/R with E = -1/(2 n_eff^2).
pub fn local_momentum(n_eff: f64, r: f64) -> ElectronMomentum {
    momentum_at_energy(-0.5 / (n_eff * n_eff), r)
}

/// k from k^2/2 = E + 1/R, clamped to [`K_MIN`] where E + 1/R <= K_MIN^2/2.
pub fn momentum_at_energy(energy: f64, r: f64) -> ElectronMomentum {
    let kinetic = energy + 1.0 / r;
    if kinetic <= 0.5 * K_MIN * K_MIN {
        ElectronMomentum {
            k: K_MIN,
            regime: Regime::Clamped,
        }
    } else {
        ElectronMomentum {
            k: (2.0 * kinetic).sqrt(),
            regime: Regime::Classical,
        }
    }
}

/// Triplet electron-atom phase-shift parametrization.
///
/// tan delta_s(k) = -a_s k + sum_i s_range_coeffs[i] k^(i+2)
///
/// tan delta_p(k) = p_background k^3 + (gamma/2) (k/k_res)^3 / (E_res - E),
/// E = k^2/2, E_res = k_res^2/2; the resonance term is omitted when
/// `p_res_k` is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringModel {
    pub species: Species,
    /// Zero-energy triplet s-wave scattering length, a.u.
    pub a_s: f64,
    #[serde(default)]
    pub s_range_coeffs: Vec<f64>,
    #[serde(default)]
    pub p_background: f64,
    /// Resonance position as a wavenumber, a.u.
    #[serde(default)]
    pub p_res_k: f64,
    /// Resonance width at the resonance energy, Hartree.
    #[serde(default)]
    pub p_res_gamma: f64,
}

impl ScatteringModel {
    /// No scattering at all.
    pub fn zero(species: Species) -> Self {
        Self {
            species,
            a_s: 0.0,
            s_range_coeffs: Vec::new(),
            p_background: 0.0,
            p_res_k: 0.0,
            p_res_gamma: 0.0,
        }
    }

    /// Default triplet model for a ground-state species: the zero-energy
    /// scattering length and the 3P shape resonance of the negative ion.
    ///
    /// Rb: a_s = -16.1, resonance near 23 meV. Cs: a_s = -21.7, resonance near
    /// 8 meV. Widths are approximate. The long-range polarization correction
    /// -pi alpha k^2 / 3 (alpha = 319.2 for Rb, 402.2 for Cs) can be added
    /// through `s_range_coeffs`; see [`ScatteringModel::polarization_coeff`].
    pub fn default_for(species: Species) -> Self {
        let (a_s, e_res_mev, width_mev): (f64, f64, f64) = match species {
            Species::Rb => (-16.1, 23.0, 30.0),
            Species::Cs => (-21.7, 8.0, 8.6),
            Species::H => (5.965, 0.0, 0.0),
        };
        let hartree_mev: f64 = 27_211.386_245_988;
        let e_res = e_res_mev / hartree_mev;
        Self {
            species,
            a_s,
            s_range_coeffs: Vec::new(),
            p_background: 0.0,
            p_res_k: (2.0 * e_res).sqrt(),
            p_res_gamma: width_mev / hartree_mev,
        }
    }

    /// The k^2 coefficient -pi alpha / 3 of the s-wave polarization term for a
    /// ground-state dipole polarizability alpha (a.u.).
    pub fn polarization_coeff(alpha: f64) -> f64 {
        -PI * alpha / 3.0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a_s, self.p_background, self.p_res_k, self.p_res_gamma]
            .iter()
            .chain(self.s_range_coeffs.iter())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::config(
                "scattering",
                "all coefficients must be finite",
            ));
        }
        if self.p_res_k < 0.0 {
            return Err(Error::config("scattering.p_res_k", "must be >= 0"));
        }
        if self.p_res_gamma < 0.0 {
            return Err(Error::config("scattering.p_res_gamma", "must be >= 0"));
        }
        Ok(())
    }

    pub fn tan_delta_s(&self, k: f64) -> f64 {
        let mut t = -self.a_s * k;
        let mut kp = k * k;
        for c in &self.s_range_coeffs {
            t += c * kp;
            kp *= k;
        }
        t
    }

    /// Raw p-wave value; infinite exactly on resonance.
    pub fn tan_delta_p(&self, k: f64) -> f64 {
        let mut t = self.p_background * k * k * k;
        if self.p_res_k > 0.0 {
            let e = 0.5 * k * k;
            let e_res = 0.5 * self.p_res_k * self.p_res_k;
            let x = k / self.p_res_k;
            t += 0.5 * self.p_res_gamma * x * x * x / (e_res - e);
        }
        t
    }
}

/// Phase shifts at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifts {
    pub tan_s: f64,
    pub tan_p: f64,
    /// |cos delta_p| < [`RESONANCE_FLAG`].
    pub near_resonance: bool,
}

/// tan delta_s and tan delta_p; in strict mode a resonance hit is an error,
/// otherwise it is flagged and |tan delta_p| is capped at 1e12.
pub fn phase_shifts(
    model: &ScatteringModel,
    k: ElectronMomentum,
    strict: bool,
) -> Result<PhaseShifts> {
    let tan_s = model.tan_delta_s(k.k);
    let raw = model.tan_delta_p(k.k);
    let cos_delta = if raw.is_finite() {
        1.0 / (1.0 + raw * raw).sqrt()
    } else {
        0.0
    };
    let near_resonance = cos_delta < RESONANCE_FLAG;
    if near_resonance && strict {
        return Err(Error::ResonanceSingularity { k: k.k, cos_delta });
    }
    let tan_p = if raw.is_finite() {
        raw.clamp(-TAN_P_CAP, TAN_P_CAP)
    } else {
        TAN_P_CAP
    };
    Ok(PhaseShifts {
        tan_s,
        tan_p,
        near_resonance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn momentum_closed_form_and_clamp() {
        let k = local_momentum(46.0, 2000.0);
        let expect = (2.0 * (-0.5 / (46.0 * 46.0) + 1.0 / 2000.0_f64)).sqrt();
        assert_eq!(k.regime, Regime::Classical);
        assert!((k.k - expect).abs() < 1e-15);
        assert!((k.k - 2.297e-2).abs() < 5e-5);
        let turning = local_momentum(46.0, 2.0 * 46.0 * 46.0);
        assert_eq!(turning.regime, Regime::Clamped);
        assert_eq!(turning.k, K_MIN);
        let inner = local_momentum(46.0, 1e-6);
        assert_eq!(inner.regime, Regime::Classical);
        assert!((inner.k / (2.0e6_f64).sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn s_wave_threshold_is_scattering_length() {
        let mut m = ScatteringModel::zero(Species::Rb);
        m.a_s = -16.0;
        m.s_range_coeffs = vec![-30.0, 100.0];
        for k in [1e-5, 1e-4, 5e-4, 9.9e-4] {
            let r = m.tan_delta_s(k) / k;
            assert!((r - 16.0).abs() < 0.01 * 16.0, "{r}");
        }
    }

    #[test]
    fn p_wave_vanishes_at_threshold_and_diverges_on_resonance() {
        let m = ScatteringModel::default_for(Species::Cs);
        assert!(m.tan_delta_p(1e-6).abs() < 1e-8);
        let k_res = ElectronMomentum {
            k: m.p_res_k,
            regime: Regime::Classical,
        };
        assert!(!m.tan_delta_p(m.p_res_k).is_finite() || m.tan_delta_p(m.p_res_k).abs() > 1e6);
        assert!(matches!(
            phase_shifts(&m, k_res, true),
            Err(Error::ResonanceSingularity { .. })
        ));
        let lax = phase_shifts(&m, k_res, false).unwrap();
        assert!(lax.near_resonance && lax.tan_p.is_finite());
        let off = ElectronMomentum {
            k: 0.5 * m.p_res_k,
            regime: Regime::Classical,
        };
        assert!(!phase_shifts(&m, off, true).unwrap().near_resonance);
    }
}
