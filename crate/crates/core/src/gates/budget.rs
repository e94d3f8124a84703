//! Closed-form error estimates, averaged over qubit configurations.

use std::f64::consts::PI;

use serde::Serialize;

use super::hamiltonian::GateScenario;

/// Terms below this are listed as negligible.
pub const NEGLIGIBLE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub spontaneous_emission: f64,
    pub blockade_leakage: f64,
    pub control_rotation: f64,
    pub nondeterministic_excitation: f64,
    pub total_error: f64,
    pub fidelity: f64,
    pub negligible: Vec<String>,
}

impl ErrorBudget {
    fn from_terms(
        spontaneous_emission: f64,
        blockade_leakage: f64,
        control_rotation: f64,
        nondeterministic_excitation: f64,
    ) -> Self {
        let total_error = spontaneous_emission
            + blockade_leakage
            + control_rotation
            + nondeterministic_excitation;
        let mut b = Self {
            spontaneous_emission,
            blockade_leakage,
            control_rotation,
            nondeterministic_excitation,
            total_error,
            fidelity: 1.0 - total_error,
            negligible: Vec::new(),
        };
        b.negligible = b.terms()[..4]
            .iter()
            .filter(|(_, v)| *v < NEGLIGIBLE)
            .map(|(k, _)| k.to_string())
            .collect();
        b
    }

    pub fn terms(&self) -> [(&'static str, f64); 6] {
        [
            ("spontaneous_emission", self.spontaneous_emission),
            ("blockade_leakage", self.blockade_leakage),
            ("control_rotation", self.control_rotation),
            (
                "nondeterministic_excitation",
                self.nondeterministic_excitation,
            ),
            ("total_error", self.total_error),
            ("fidelity", self.fidelity),
        ]
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Off-resonant leakage of one target, Omega_eff^2 / (4 delta^2).
pub fn blockade_leakage(omega_eff: f64, delta: f64) -> f64 {
    omega_eff * omega_eff / (4.0 * delta * delta)
}

/// (1/2) Omega_Ry^2 / (4 delta_r^2).
pub fn control_rotation(omega_ry: f64, delta_r: f64) -> f64 {
    0.5 * omega_ry * omega_ry / (4.0 * delta_r * delta_r)
}

/// (1/2^(k+1)) sum_j C(k,j) (j - k/2)^2 V^2 / Omega_Ry^2.
pub fn nondeterministic_excitation(k: usize, v_rf: f64, omega_ry: f64) -> f64 {
    let sum: f64 = (0..=k)
        .map(|j| binomial(k, j) * (j as f64 - k as f64 / 2.0).powi(2))
        .sum();
    sum * v_rf * v_rf / (omega_ry * omega_ry) / 2f64.powi(k as i32 + 1)
}

/// (1/2^(k+1)) sum_{j>=1} C(k,j) Omega_Ry^2 / (4 j^2 V^2).
pub fn toffoli_leakage(k: usize, omega_ry: f64, v_rf: f64) -> f64 {
    let sum: f64 = (1..=k)
        .map(|j| binomial(k, j) * omega_ry * omega_ry / (4.0 * (j * j) as f64 * v_rf * v_rf))
        .sum();
    sum / 2f64.powi(k as i32 + 1)
}

/// Parallelized gate: E_sp = (1/2)(2pi/(2 Omega_Ry) + 2pi/Omega_eff) Gamma,
/// leakage with the Raman detuning |delta| (delta = -V_RF), control rotation
/// and non-deterministic excitation for a plaquette of `k` atoms.
pub fn error_budget_parallel(sc: &GateScenario, k: usize) -> ErrorBudget {
    let e_sp = 0.5 * (2.0 * PI / (2.0 * sc.omega_ry) + 2.0 * PI / sc.omega_eff) * sc.gamma_ry;
    ErrorBudget::from_terms(
        e_sp,
        blockade_leakage(sc.omega_eff, sc.delta),
        control_rotation(sc.omega_ry, sc.delta_r),
        nondeterministic_excitation(k, sc.v_rf_1, sc.omega_ry),
    )
}

/// Toffoli gate: E_sp = 2pi/(4 Omega_Ry) Gamma, the blockade leakage sum
/// and the neighboring-level rotation.
pub fn error_budget_toffoli(sc: &GateScenario, k: usize) -> ErrorBudget {
    let e_sp = 2.0 * PI / (4.0 * sc.omega_ry) * sc.gamma_ry;
    ErrorBudget::from_terms(
        e_sp,
        toffoli_leakage(k, sc.omega_ry, sc.v_rf_1),
        control_rotation(sc.omega_ry, sc.delta_r),
        0.0,
    )
}
