use serde::Serialize;

use crate::dynamics::CMatrix;
use crate::error::{Error, Result};

use super::budget::ErrorBudget;
use super::hamiltonian::GateScenario;

/// Tr|M + M M^dagger| / (2n) with M = U_ideal^dagger U_gate and |X| the
/// matrix absolute value (sum of singular values under the trace).
pub fn phase_fidelity(u_gate: &CMatrix, u_ideal: &CMatrix) -> Result<f64> {
    if u_gate.shape() != u_ideal.shape() || u_gate.nrows() != u_gate.ncols() {
        return Err(Error::DimensionMismatch {
            expected: u_ideal.nrows(),
            found: u_gate.nrows(),
        });
    }
    let n = u_gate.nrows();
    let m = u_ideal.adjoint() * u_gate;
    let x = &m + &m * m.adjoint();
    let trace: f64 = x.singular_values().iter().sum();
    Ok((trace / (2.0 * n as f64)).clamp(0.0, 1.0))
}

/// Mean over basis states of |<U_ideal e_s | U_gate e_s>|^2, and the worst state.
pub fn population_fidelity(u_gate: &CMatrix, u_ideal: &CMatrix) -> Result<(f64, usize, f64)> {
    if u_gate.shape() != u_ideal.shape() {
        return Err(Error::DimensionMismatch {
            expected: u_ideal.nrows(),
            found: u_gate.nrows(),
        });
    }
    let n = u_gate.ncols();
    let mut sum = 0.0;
    let (mut worst, mut worst_value) = (0, f64::INFINITY);
    for s in 0..n {
        let f = u_ideal.column(s).dotc(&u_gate.column(s)).norm_sqr();
        sum += f;
        if f < worst_value {
            worst = s;
            worst_value = f;
        }
    }
    Ok((
        (sum / n as f64).clamp(0.0, 1.0),
        worst,
        worst_value.clamp(0.0, 1.0),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub protocol: String,
    pub dimension: usize,
    pub phase_fidelity: f64,
    pub population_fidelity: f64,
    pub worst_case_state: String,
    pub worst_case_fidelity: f64,
    pub scenario: GateScenario,
    pub error_budget: Option<ErrorBudget>,
}

impl FidelityReport {
    pub fn compare(
        protocol: &str,
        u_gate: &CMatrix,
        u_ideal: &CMatrix,
        label: impl Fn(usize) -> String,
        scenario: &GateScenario,
    ) -> Result<Self> {
        let phase = phase_fidelity(u_gate, u_ideal)?;
        let (pop, worst, worst_value) = population_fidelity(u_gate, u_ideal)?;
        Ok(Self {
            protocol: protocol.to_string(),
            dimension: u_gate.nrows(),
            phase_fidelity: phase,
            population_fidelity: pop,
            worst_case_state: label(worst),
            worst_case_fidelity: worst_value,
            scenario: *scenario,
            error_budget: None,
        })
    }

    /// Plain `key: value` lines.
    pub fn to_key_value(&self) -> String {
        let mut lines = vec![
            format!("protocol: {}", self.protocol),
            format!("dimension: {}", self.dimension),
            format!("phase_fidelity: {:.12e}", self.phase_fidelity),
            format!("population_fidelity: {:.12e}", self.population_fidelity),
            format!("worst_case_state: {}", self.worst_case_state),
            format!("worst_case_fidelity: {:.12e}", self.worst_case_fidelity),
        ];
        if let Some(b) = &self.error_budget {
            for (k, v) in b.terms() {
                lines.push(format!("error_budget.{k}: {v:.12e}"));
            }
        }
        lines.join("\n") + "\n"
    }
}
