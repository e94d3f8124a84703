//! Gate protocols as pulse sequences on a plaquette register.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{
    evolution_operator, periodic_evolution_operator, CMatrix, CVector, MagnusOptions, PulseSequence,
};
use crate::error::{Error, Result};

use super::fidelity::FidelityReport;
use super::hamiltonian::{
    build_parallel_hamiltonian, build_toffoli_hamiltonian, require_role, rydberg_hamiltonian,
    GateScenario,
};
use super::register::{c, embed_qubit, hadamard, pauli_x, CentralRole, PlaquetteRegister, RYDBERG};

/// A simulated protocol: its propagator on the full register, the ideal gate
/// on the qubit subspace and the comparison between the two.
#[derive(Debug, Clone)]
pub struct GateRun {
    pub register: PlaquetteRegister,
    pub unitary: CMatrix,
    pub ideal: CMatrix,
    pub report: FidelityReport,
}

impl GateRun {
    fn new(
        protocol: &str,
        reg: PlaquetteRegister,
        unitary: CMatrix,
        ideal: CMatrix,
        sc: &GateScenario,
    ) -> Result<Self> {
        let qubit_reg = PlaquetteRegister::new(reg.size, reg.central, 2)?;
        let restricted = if reg.central_levels == 3 {
            reg.restrict(&unitary)
        } else {
            unitary.clone()
        };
        let report =
            FidelityReport::compare(protocol, &restricted, &ideal, |i| qubit_reg.label(i), sc)?;
        Ok(Self {
            register: reg,
            unitary,
            ideal,
            report,
        })
    }

    /// The propagator restricted to the qubit subspace.
    pub fn qubit_unitary(&self) -> CMatrix {
        self.register.restrict(&self.unitary)
    }

    pub fn apply(&self, psi0: &CVector) -> Result<CVector> {
        if psi0.len() != self.unitary.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.unitary.ncols(),
                found: psi0.len(),
            });
        }
        Ok(&self.unitary * psi0)
    }

    /// Probability that basis state `from` ends in basis state `to` (full register indices).
    pub fn probability(&self, from: usize, to: usize) -> f64 {
        self.unitary[(to, from)].norm_sqr()
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::config(key, "must be > 0 for this protocol"));
    }
    Ok(())
}

fn arg(z: Complex64) -> f64 {
    z.im.atan2(z.re)
}

/// Hadamard on every plaquette qubit (when `plaquette`) and on the central
/// qubit levels.
fn hadamard_layer(reg: &PlaquetteRegister, plaquette: bool) -> CMatrix {
    let mut m = reg.central_operator(&embed_qubit(&hadamard(), reg.central_levels));
    if plaquette {
        for q in 0..reg.size {
            m = reg.plaquette_operator(q, &hadamard()) * m;
        }
    }
    m
}

fn target_z(reg: &PlaquetteRegister, phase: f64) -> CMatrix {
    let z = CMatrix::from_row_slice(
        2,
        2,
        &[c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, phase)],
    );
    let mut m = CMatrix::identity(reg.dim(), reg.dim());
    for q in 0..reg.size {
        m = reg.plaquette_operator(q, &z) * m;
    }
    m
}

fn central_phases(reg: &PlaquetteRegister, phases: &[f64]) -> CMatrix {
    let d = reg.central_levels;
    let mut u = CMatrix::identity(d, d);
    for (i, p) in phases.iter().enumerate() {
        u[(i, i)] = Complex64::from_polar(1.0, *p);
    }
    reg.central_operator(&u)
}

/// Single-target propagators of the Raman pulse, t = pi / Omega_eff, with the
/// control in the ground (`u0`) and in the Rydberg state (`u1`).
fn raman_blocks(sc: &GateScenario) -> Result<(CMatrix, CMatrix, f64)> {
    let t = PI / sc.omega_eff;
    let block = |det: f64| {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0), c(sc.omega_eff / 2.0), c(sc.omega_eff / 2.0), c(det)],
        );
        evolution_operator(&h, t)
    };
    Ok((block(sc.delta)?, block(sc.delta + sc.v_rf_1)?, t))
}

/// Parallelized gate: control pi pulse to |r>, Raman pulse on all targets,
/// control pi pulse back. Single-qubit Z frame corrections, computed from the
/// one-target Raman propagators, make the ideal-pulse limit equal to
/// |0><0| x I + |1><1| x prod X.
pub fn parallel_gate_sequence(reg: &PlaquetteRegister, sc: &GateScenario) -> Result<PulseSequence> {
    require_role(reg, CentralRole::Control)?;
    sc.validate()?;
    positive("gate.omega_eff_kHz", sc.omega_eff)?;
    positive("gate.omega_ry_MHz", sc.omega_ry)?;
    let k = reg.size as f64;

    let (u0, u1, t_raman) = raman_blocks(sc)?;
    let (a0, a1) = (arg(u0[(0, 0)]), arg(u0[(1, 1)]));
    let (b01, b10) = (arg(u1[(0, 1)]), arg(u1[(1, 0)]));
    let alpha = 0.5 * ((a0 - a1) + (b10 - b01));
    let beta = 0.5 * ((a0 - a1) - (b10 - b01));
    let g1 = b01 + alpha;

    let h_control = rydberg_hamiltonian(reg, sc, sc.omega_ry, 0.0, false)?;
    let h_raman = build_parallel_hamiltonian(reg, sc)?;
    let t_pi = PI / sc.omega_ry;
    Ok(PulseSequence::new()
        .evolve(h_control.clone(), t_pi)
        .apply(target_z(reg, alpha))
        .evolve(h_raman, t_raman)
        .apply(target_z(reg, beta))
        .evolve(h_control, t_pi)
        .apply(central_phases(reg, &[-k * a0, -(k * g1 + PI)])))
}

/// The ideal fan-out on the qubit subspace (central qubit last).
pub fn ideal_parallel(size: usize) -> Result<CMatrix> {
    let reg = PlaquetteRegister::new(size, CentralRole::Control, 2)?;
    let n = reg.dim();
    let all = reg.configurations() - 1;
    let mut u = CMatrix::zeros(n, n);
    for s in 0..reg.configurations() {
        u[(reg.index(s, 0), reg.index(s, 0))] = c(1.0);
        u[(reg.index(s ^ all, 1), reg.index(s, 1))] = c(1.0);
    }
    Ok(u)
}

pub fn parallel_gate_unitary(reg: &PlaquetteRegister, sc: &GateScenario) -> Result<GateRun> {
    let u = parallel_gate_sequence(reg, sc)?.unitary()?;
    GateRun::new("parallel", *reg, u, ideal_parallel(reg.size)?, sc)
}

/// Run the parallelized gate on `psi0` (full register).
pub fn parallel_gate(
    reg: &PlaquetteRegister,
    sc: &GateScenario,
    psi0: &CVector,
) -> Result<(CVector, FidelityReport)> {
    let run = parallel_gate_unitary(reg, sc)?;
    Ok((run.apply(psi0)?, run.report))
}

/// Rotation probability of one plaquette atom during the Raman pulse with the
/// control in |r>: the two-level problem with detuning delta + V_RF_1.
pub fn rotation_probability(sc: &GateScenario) -> Result<f64> {
    positive("gate.omega_eff_kHz", sc.omega_eff)?;
    let (_, u1, _) = raman_blocks(sc)?;
    Ok(u1[(1, 0)].norm_sqr())
}

/// Ideal C_k-Z (or C_k-NOT with `hadamard`) on the qubit subspace.
pub fn ideal_toffoli(size: usize, hadamard_target: bool) -> Result<CMatrix> {
    let reg = PlaquetteRegister::new(size, CentralRole::Target, 2)?;
    let n = reg.dim();
    let all = reg.configurations() - 1;
    let mut u = CMatrix::identity(n, n);
    if hadamard_target {
        let (a, b) = (reg.index(all, 0), reg.index(all, 1));
        u[(a, a)] = c(0.0);
        u[(b, b)] = c(0.0);
        u[(a, b)] = c(1.0);
        u[(b, a)] = c(1.0);
    } else {
        let b = reg.index(all, 1);
        u[(b, b)] = c(-1.0);
    }
    Ok(u)
}

/// Duration of one generalized 2pi rotation at Rabi frequency `omega` and
/// offset `delta_prime`.
pub fn two_pi_duration(omega: f64, delta_prime: f64) -> f64 {
    2.0 * PI / omega.hypot(delta_prime)
}

/// Toffoli: one generalized 2pi rotation of the central target under H_Tof,
/// timed for the all-ones sector; optionally sandwiched by Hadamards.
pub fn toffoli_gate_unitary(
    reg: &PlaquetteRegister,
    sc: &GateScenario,
    hadamard_target: bool,
) -> Result<GateRun> {
    require_role(reg, CentralRole::Target)?;
    sc.validate()?;
    positive("gate.omega_ry_MHz", sc.omega_ry)?;
    let k = reg.size as f64;
    let big_delta = sc.big_delta.unwrap_or(-k * sc.v_rf_1);
    let offset = big_delta + k * sc.v_rf_1;
    let h = build_toffoli_hamiltonian(reg, sc)?;
    let mut seq = PulseSequence::new();
    let had = hadamard_layer(reg, false);
    if hadamard_target {
        seq = seq.apply(had.clone());
    }
    seq = seq.evolve(h, two_pi_duration(sc.omega_ry, offset));
    if hadamard_target {
        seq = seq.apply(had);
    }
    let name = if hadamard_target {
        "toffoli-not"
    } else {
        "toffoli-z"
    };
    GateRun::new(
        name,
        *reg,
        seq.unitary()?,
        ideal_toffoli(reg.size, hadamard_target)?,
        sc,
    )
}

pub fn toffoli_gate(
    reg: &PlaquetteRegister,
    sc: &GateScenario,
    hadamard_target: bool,
    psi0: &CVector,
) -> Result<(CVector, FidelityReport)> {
    let run = toffoli_gate_unitary(reg, sc, hadamard_target)?;
    Ok((run.apply(psi0)?, run.report))
}

/// Phase picked up by |1> over a generalized 2pi rotation with offset
/// x = delta'/Omega: pi (1 - x / sqrt(1 + x^2)).
pub fn excitation_phase(x: f64) -> f64 {
    PI * (1.0 - x / (1.0 + x * x).sqrt())
}

/// <1|U|1> of the two-level drive {|1>, |r>} with H = (Omega/2) X + delta' |r><r|
/// over one generalized 2pi rotation.
pub fn detuned_rotation_amplitude(omega: f64, delta_prime: f64) -> Result<Complex64> {
    let h = CMatrix::from_row_slice(
        2,
        2,
        &[c(0.0), c(omega / 2.0), c(omega / 2.0), c(delta_prime)],
    );
    Ok(evolution_operator(&h, two_pi_duration(omega, delta_prime))?[(0, 0)])
}

/// Which odd sectors the stabilizer drive addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilizerTones {
    /// One tone per odd number of plaquette atoms in |1>.
    AllOdd,
    /// A single tone resonant with the sector of `j` atoms in |1>.
    Single(usize),
}

/// delta' that makes the excitation phase equal -2 theta (mod 2pi); None
/// when theta needs no excitation at all.
pub fn offset_for_theta(theta: f64, omega: f64, max_offset: f64) -> Result<Option<f64>> {
    let phi = (-2.0 * theta).rem_euclid(2.0 * PI);
    if phi < 1e-12 || 2.0 * PI - phi < 1e-12 {
        return Ok(None);
    }
    let cosine = 1.0 - phi / PI;
    let offset = omega * cosine / (1.0 - cosine * cosine).sqrt();
    if offset.abs() > max_offset {
        return Err(Error::PhaseUnreachable {
            theta,
            reason: format!(
                "needs |delta'| = {:.4e} rad/us beyond the sector spacing limit {:.4e}",
                offset.abs(),
                max_offset
            ),
        });
    }
    Ok(Some(offset))
}

/// Ideal exp(i theta prod Z) on the plaquette for an auxiliary in |1>,
/// identity for an auxiliary in |0>.
pub fn ideal_stabilizer_direct(size: usize, theta: f64) -> Result<CMatrix> {
    let reg = PlaquetteRegister::new(size, CentralRole::Auxiliary, 2)?;
    let mut u = CMatrix::identity(reg.dim(), reg.dim());
    for s in 0..reg.configurations() {
        let parity = if reg.ones(s) % 2 == 0 { 1.0 } else { -1.0 };
        let i = reg.index(s, 1);
        u[(i, i)] = Complex64::from_polar(1.0, theta * parity);
    }
    Ok(u)
}

/// Direct stabilizer phase: the auxiliary (in |1>) is driven through one
/// generalized 2pi rotation whose tones address the odd-parity sectors, then
/// a Stark phase on its |1> level.
pub fn stabilizer_phase_direct_unitary(
    reg: &PlaquetteRegister,
    sc: &GateScenario,
    theta: f64,
    tones: StabilizerTones,
) -> Result<GateRun> {
    require_role(reg, CentralRole::Auxiliary)?;
    sc.validate()?;
    positive("gate.omega_ry_MHz", sc.omega_ry)?;
    let k = reg.size;
    let sector_shift = |j: usize| j as f64 * sc.v_rf_1 + (k - j) as f64 * sc.v_rf_0;
    let spacing = (sc.v_rf_1 - sc.v_rf_0).abs();
    let offset = offset_for_theta(theta, sc.omega_ry, spacing / 2.0)?;
    let tone_sectors: Vec<usize> = match tones {
        StabilizerTones::AllOdd => (1..=k).step_by(2).collect(),
        StabilizerTones::Single(j) => {
            if j > k {
                return Err(Error::config(
                    "gate.tone",
                    format!("sector {j} exceeds plaquette size {k}"),
                ));
            }
            vec![j]
        }
    };

    let n = reg.dim();
    let mut u = CMatrix::identity(n, n);
    if let Some(dp) = offset {
        let detunings: Vec<f64> = tone_sectors.iter().map(|&j| dp - sector_shift(j)).collect();
        let t = two_pi_duration(sc.omega_ry, dp);
        // sectors with the same shift share a block
        let mut cache: Vec<(usize, CMatrix)> = Vec::new();
        for s in 0..reg.configurations() {
            let j = reg.ones(s);
            let block = match cache.iter().find(|(jj, _)| *jj == j) {
                Some((_, b)) => b.clone(),
                None => {
                    let b = auxiliary_block(sc.omega_ry, sector_shift(j), &detunings, t)?;
                    cache.push((j, b.clone()));
                    b
                }
            };
            let idx = [reg.index(s, 1), reg.index(s, RYDBERG)];
            for a in 0..2 {
                for b in 0..2 {
                    u[(idx[a], idx[b])] = block[(a, b)];
                }
            }
        }
    }
    let stark = central_phases(reg, &[0.0, theta]);
    let u = stark * u;
    GateRun::new(
        "stabilizer-direct",
        *reg,
        u,
        ideal_stabilizer_direct(k, theta)?,
        sc,
    )
}

/// Propagator on {|1>, |r>} for a sector with level shift `shift`, driven by
/// tones of equal Rabi frequency at the given detunings. Written in the frame
/// of the first tone; the other tones beat against it.
fn auxiliary_block(omega: f64, shift: f64, detunings: &[f64], t: f64) -> Result<CMatrix> {
    let d0 = detunings[0];
    if detunings.len() == 1 {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0), c(omega / 2.0), c(omega / 2.0), c(shift + d0)],
        );
        return evolution_operator(&h, t);
    }
    let beats: Vec<f64> = detunings.iter().map(|d| d - d0).collect();
    let fastest = beats.iter().fold(0.0f64, |m, b| m.max(b.abs())) + omega + (shift + d0).abs();
    // the beat notes are multiples of the smallest one, so H is periodic
    let base = beats
        .iter()
        .filter(|b| b.abs() > 0.0)
        .fold(f64::INFINITY, |m, b| m.min(b.abs()));
    let period = 2.0 * PI / base;
    let h = move |time: f64| {
        let g: Complex64 = beats
            .iter()
            .map(|b| Complex64::from_polar(omega / 2.0, b * time))
            .sum();
        CMatrix::from_row_slice(2, 2, &[c(0.0), g.conj(), g, c(shift + d0)])
    };
    let opts = MagnusOptions {
        tolerance: 1e-10 / t,
        initial_step: 0.1 / fastest,
        min_step: 1e-9 / fastest,
    };
    periodic_evolution_operator(&h, 2, period, t, opts)
}

/// Ideal stabilizer through the parallel gate on the qubit subspace:
/// B Z_theta B with B = H U_g H (Hadamards on the plaquette only when
/// `hadamard_plaquette`).
pub fn ideal_stabilizer_via_parallel(
    size: usize,
    theta: f64,
    hadamard_plaquette: bool,
) -> Result<CMatrix> {
    let reg = PlaquetteRegister::new(size, CentralRole::Control, 2)?;
    let h = hadamard_layer(&reg, hadamard_plaquette);
    let b = &h * ideal_parallel(size)? * &h;
    let z = central_phases(&reg, &[theta, -theta]);
    Ok(&b * z * &b)
}

/// Stabilizer phase through the parallelized gate: B_p, a Z phase on the
/// control, B_p again (B_p is its own inverse).
pub fn stabilizer_via_parallel_unitary(
    reg: &PlaquetteRegister,
    sc: &GateScenario,
    theta: f64,
    hadamard_plaquette: bool,
) -> Result<GateRun> {
    let parallel = parallel_gate_sequence(reg, sc)?.unitary()?;
    let h = hadamard_layer(reg, hadamard_plaquette);
    let b = &h * parallel * &h;
    let z = central_phases(reg, &[theta, -theta]);
    let u = &b * z * &b;
    let name = if hadamard_plaquette {
        "stabilizer-parallel"
    } else {
        "stabilizer-parallel-x"
    };
    GateRun::new(
        name,
        *reg,
        u,
        ideal_stabilizer_via_parallel(reg.size, theta, hadamard_plaquette)?,
        sc,
    )
}

/// The single-target X operator used by tests and reports.
pub fn target_flip(reg: &PlaquetteRegister, q: usize) -> CMatrix {
    reg.plaquette_operator(q, &pauli_x())
}
