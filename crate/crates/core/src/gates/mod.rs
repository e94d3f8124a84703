//! Plaquette gate protocols, their fidelities and error budgets.
//!
//! Drives use the Rabi convention H = (Omega/2)(|a><b| + h.c.), so a
//! resonant pi pulse lasts pi/Omega.

mod budget;
mod fidelity;
mod hamiltonian;
mod protocols;
mod register;

pub use budget::{
    blockade_leakage, control_rotation, error_budget_parallel, error_budget_toffoli,
    nondeterministic_excitation, toffoli_leakage, ErrorBudget, NEGLIGIBLE,
};
pub use fidelity::{phase_fidelity, population_fidelity, FidelityReport};
pub use hamiltonian::{
    build_parallel_hamiltonian, build_toffoli_hamiltonian, from_ghz, from_khz, from_mhz,
    rydberg_hamiltonian, GateScenario,
};
pub use protocols::{
    detuned_rotation_amplitude, excitation_phase, ideal_parallel, ideal_stabilizer_direct,
    ideal_stabilizer_via_parallel, ideal_toffoli, offset_for_theta, parallel_gate,
    parallel_gate_sequence, parallel_gate_unitary, rotation_probability,
    stabilizer_phase_direct_unitary, stabilizer_via_parallel_unitary, target_flip, toffoli_gate,
    toffoli_gate_unitary, two_pi_duration, GateRun, StabilizerTones,
};
pub use register::{embed_qubit, hadamard, pauli_x, CentralRole, PlaquetteRegister, RYDBERG};

pub use crate::dynamics::{propagate, propagate_sequence, PulseSequence};
