use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::CMatrix;
use crate::error::{Error, Result};

use super::register::{c, pauli_x, CentralRole, PlaquetteRegister, RYDBERG};

/// Gate parameters. Frequencies are angular, rad/us; `gamma_ry` is a rate in
/// 1/us; `theta` in rad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateScenario {
    /// <1|V_RF|1> seen by a plaquette atom in |1>.
    pub v_rf_1: f64,
    /// <0|V_RF|0> seen by a plaquette atom in |0>.
    pub v_rf_0: f64,
    /// Effective Raman Rabi frequency of the plaquette qubits.
    pub omega_eff: f64,
    /// Rabi frequency of the central atom's Rydberg drive.
    pub omega_ry: f64,
    /// Rydberg drive detuning; None selects the protocol default.
    pub big_delta: Option<f64>,
    /// Raman two-photon detuning.
    pub delta: f64,
    /// Offset of the Rydberg drive from the targeted sector.
    pub delta_prime: f64,
    pub gamma_ry: f64,
    /// Distance to the nearest unwanted Rydberg level.
    pub delta_r: f64,
    pub theta: f64,
}

/// Angular frequency in rad/us from a value quoted as f/2pi.
pub fn from_mhz(f: f64) -> f64 {
    2.0 * PI * f
}

pub fn from_khz(f: f64) -> f64 {
    2.0 * PI * f * 1e-3
}

pub fn from_ghz(f: f64) -> f64 {
    2.0 * PI * f * 1e3
}

impl GateScenario {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("gate.omega_eff_kHz", self.omega_eff),
            ("gate.omega_ry_MHz", self.omega_ry),
            ("gate.gamma_ry_kHz", self.gamma_ry),
            ("gate.delta_r_GHz", self.delta_r),
        ];
        for (key, v) in rates {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::config(key, "must be finite and >= 0"));
            }
        }
        let finite = [
            ("gate.V_RF_1_MHz", self.v_rf_1),
            ("gate.V_RF_0_MHz", self.v_rf_0),
            ("gate.delta_MHz", self.delta),
            ("gate.delta_prime_MHz", self.delta_prime),
            ("gate.theta_rad", self.theta),
            ("gate.rydberg_detuning_MHz", self.big_delta.unwrap_or(0.0)),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }
}

fn check_role(reg: &PlaquetteRegister, role: CentralRole) -> Result<()> {
    if reg.central != role {
        return Err(Error::config(
            "gate.protocol",
            format!(
                "register central atom is {:?}, protocol needs {:?}",
                reg.central, role
            ),
        ));
    }
    Ok(())
}

/// Projector of the central atom onto the level that carries the V_RF shift:
/// |r> for three levels, |1> for two.
fn excited_level(reg: &PlaquetteRegister) -> usize {
    if reg.central_levels == 3 {
        RYDBERG
    } else {
        1
    }
}

/// H = sum_l [ (Omega_eff/2) X_l + delta n_l + V_RF n_l P_c ], with P_c the
/// excited control projector.
pub fn build_parallel_hamiltonian(reg: &PlaquetteRegister, sc: &GateScenario) -> Result<CMatrix> {
    check_role(reg, CentralRole::Control)?;
    let exc = excited_level(reg);
    let mut h = reg.diagonal(|s, cs| {
        let n1 = reg.ones(s) as f64;
        let v = if cs == exc { sc.v_rf_1 * n1 } else { 0.0 };
        c(sc.delta * n1 + v)
    });
    let x = pauli_x() * c(sc.omega_eff / 2.0);
    for q in 0..reg.size {
        h += reg.plaquette_operator(q, &x);
    }
    Ok(h)
}

/// Central drive (Omega/2)(|r><1| + h.c.) + big_delta |r><r| plus the
/// configuration-dependent shift of |r>: V_RF_1 per plaquette atom in |1> and
/// V_RF_0 per atom in |0> (the latter only when `with_v0`).
pub fn rydberg_hamiltonian(
    reg: &PlaquetteRegister,
    sc: &GateScenario,
    omega: f64,
    big_delta: f64,
    with_v0: bool,
) -> Result<CMatrix> {
    if reg.central_levels != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: reg.central_levels,
        });
    }
    let mut h = reg.diagonal(|s, cs| {
        if cs != RYDBERG {
            return c(0.0);
        }
        let n1 = reg.ones(s) as f64;
        let n0 = (reg.size - reg.ones(s)) as f64;
        let v0 = if with_v0 { sc.v_rf_0 * n0 } else { 0.0 };
        c(big_delta + sc.v_rf_1 * n1 + v0)
    });
    for s in 0..reg.configurations() {
        let (a, b) = (reg.index(s, 1), reg.index(s, RYDBERG));
        h[(a, b)] += c(omega / 2.0);
        h[(b, a)] += c(omega / 2.0);
    }
    Ok(h)
}

/// The Toffoli Hamiltonian; big_delta defaults to -k V_RF_1.
pub fn build_toffoli_hamiltonian(reg: &PlaquetteRegister, sc: &GateScenario) -> Result<CMatrix> {
    check_role(reg, CentralRole::Target)?;
    let big_delta = sc.big_delta.unwrap_or(-(reg.size as f64) * sc.v_rf_1);
    rydberg_hamiltonian(reg, sc, sc.omega_ry, big_delta, true)
}

pub(crate) fn require_role(reg: &PlaquetteRegister, role: CentralRole) -> Result<()> {
    check_role(reg, role)?;
    if reg.central_levels != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: reg.central_levels,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> GateScenario {
        GateScenario {
            v_rf_1: from_mhz(1.3),
            v_rf_0: from_mhz(0.01),
            omega_eff: from_khz(370.0),
            omega_ry: from_mhz(10.0),
            big_delta: None,
            delta: -from_mhz(1.3),
            delta_prime: 0.0,
            gamma_ry: 0.018,
            delta_r: from_ghz(25.0),
            theta: 0.0,
        }
    }

    #[test]
    fn parallel_hamiltonian_is_hermitian_and_block_diagonal() {
        let reg = PlaquetteRegister::with_rydberg(4, CentralRole::Control).unwrap();
        let h = build_parallel_hamiltonian(&reg, &scenario()).unwrap();
        assert_eq!((&h - h.adjoint()).norm(), 0.0);
        for i in 0..reg.dim() {
            for j in 0..reg.dim() {
                if reg.split(i).1 != reg.split(j).1 {
                    assert_eq!(h[(i, j)], c(0.0));
                }
            }
        }
    }

    #[test]
    fn control_zero_sector_has_no_interaction() {
        let reg = PlaquetteRegister::with_rydberg(4, CentralRole::Control).unwrap();
        let sc = scenario();
        let h = build_parallel_hamiltonian(&reg, &sc).unwrap();
        for s in 0..16 {
            let i = reg.index(s, 0);
            assert_eq!(h[(i, i)].re, sc.delta * reg.ones(s) as f64);
        }
    }

    #[test]
    fn toffoli_hamiltonian_shape() {
        let reg = PlaquetteRegister::with_rydberg(4, CentralRole::Target).unwrap();
        let sc = scenario();
        let h = build_toffoli_hamiltonian(&reg, &sc).unwrap();
        let top = reg.index(0b1111, RYDBERG);
        assert!(h[(top, top)].re.abs() < 1e-12);
        assert!(build_parallel_hamiltonian(&reg, &sc).is_err());
    }
}
