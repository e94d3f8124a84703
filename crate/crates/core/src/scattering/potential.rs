//! The Fermi pseudopotential of a Rydberg electron at a ground-state atom:
//!
//! V(R) = 2 pi tan(delta_s)/k |psi(R)|^2 - 6 pi tan(delta_p)/k^3 |grad psi(R)|^2
//!
//! with k = k(R) the local electron wavenumber.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};

use crate::atomic::{
    level_energy, PreparedState, QuantumDefectTable, RadialGrid, RydbergSuperposition,
    WavefunctionCache,
};
use crate::error::{Error, Result};
use crate::units;

use super::model::{momentum_at_energy, phase_shifts, PhaseShifts, ScatteringModel};

/// V_RF at one ground-atom position; energies in Hartree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSample {
    pub position: Vector3<f64>,
    pub s_term: f64,
    pub p_term: f64,
    pub total: f64,
    pub k: f64,
    pub near_resonance: bool,
}

impl InteractionSample {
    pub fn s_term_mhz(&self) -> f64 {
        units::hartree_to_mhz(self.s_term)
    }

    pub fn p_term_mhz(&self) -> f64 {
        units::hartree_to_mhz(self.p_term)
    }

    pub fn total_mhz(&self) -> f64 {
        units::hartree_to_mhz(self.total)
    }
}

/// s-wave and p-wave prefactors 2 pi tan(delta_s)/k and -6 pi tan(delta_p)/k^3.
pub fn contact_prefactors(ps: &PhaseShifts, k: f64) -> (f64, f64) {
    (2.0 * PI * ps.tan_s / k, -6.0 * PI * ps.tan_p / (k * k * k))
}

/// A prepared Rydberg state together with a scattering model.
#[derive(Debug, Clone)]
pub struct RfEvaluator {
    pub state: PreparedState,
    pub model: ScatteringModel,
    /// Electron energy entering k(R), Hartree.
    pub energy: f64,
    pub strict: bool,
}

impl RfEvaluator {
    /// The electron energy is the weight-averaged level energy of the state.
    pub fn new(
        state: &RydbergSuperposition,
        model: &ScatteringModel,
        defects: &QuantumDefectTable,
        grid: Option<&RadialGrid>,
        cache: &WavefunctionCache,
        strict: bool,
    ) -> Result<Self> {
        model.validate()?;
        let energy = state
            .components
            .iter()
            .map(|(l, a)| a.norm_sqr() * level_energy(l, defects))
            .sum::<f64>()
            / state.norm_sqr();
        Ok(Self {
            state: PreparedState::new(state, defects, grid, cache)?,
            model: model.clone(),
            energy,
            strict,
        })
    }

    pub fn sample(&self, point: &Vector3<f64>) -> Result<InteractionSample> {
        let k = momentum_at_energy(self.energy, point.norm());
        let ps = phase_shifts(&self.model, k, self.strict)?;
        let (cs, cp) = contact_prefactors(&ps, k.k);
        let psi = self.state.evaluate(point);
        let s_term = cs * psi.density();
        let p_term = cp * psi.gradient_sqr();
        Ok(InteractionSample {
            position: *point,
            s_term,
            p_term,
            total: s_term + p_term,
            k: k.k,
            near_resonance: ps.near_resonance,
        })
    }
}

/// V_RF of `state` at `point` (Cartesian, a.u.).
pub fn v_rf(
    state: &RydbergSuperposition,
    point: &Vector3<f64>,
    model: &ScatteringModel,
    defects: &QuantumDefectTable,
    grid: Option<&RadialGrid>,
) -> Result<InteractionSample> {
    RfEvaluator::new(
        state,
        model,
        defects,
        grid,
        &WavefunctionCache::in_memory(),
        false,
    )?
    .sample(point)
}

/// Ground-state motional density of a trapped atom: a product of Gaussians
/// exp(-x^2/sigma^2)/(sqrt(pi) sigma) per axis, a.u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteDensity {
    pub center: Vector3<f64>,
    pub sigma: Vector3<f64>,
}

impl SiteDensity {
    /// From nm inputs.
    pub fn from_nm(center_nm: Vector3<f64>, sigma_nm: Vector3<f64>) -> Self {
        Self {
            center: center_nm.map(units::nm_to_bohr),
            sigma: sigma_nm.map(units::nm_to_bohr),
        }
    }
}

/// Gauss-Hermite nodes and weights for the weight e^{-t^2} (Golub-Welsch).
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for i in 1..order {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

const QUADRATURE_START: usize = 8;
const QUADRATURE_MAX: usize = 96;
const QUADRATURE_RTOL: f64 = 0.01;

/// Average of V_RF over the site density, by tensor-product Gauss-Hermite
/// quadrature with the order doubled until the result moves by < 1%.
/// Energy in Hartree.
pub fn site_averaged_interaction(eval: &RfEvaluator, site: &SiteDensity) -> Result<f64> {
    let mut order = QUADRATURE_START;
    let mut prev = site_average_at_order(eval, site, order)?;
    while order < QUADRATURE_MAX {
        order = (order * 2).min(QUADRATURE_MAX);
        let next = site_average_at_order(eval, site, order)?;
        if (next - prev).abs() <= QUADRATURE_RTOL * next.abs() || (next == 0.0 && prev == 0.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged(format!(
        "site average still changing at order {QUADRATURE_MAX} (last value {prev:e})"
    )))
}

fn site_average_at_order(eval: &RfEvaluator, site: &SiteDensity, order: usize) -> Result<f64> {
    use rayon::prelude::*;
    let (t, w) = gauss_hermite(order);
    let norm = PI.powf(1.5);
    // fixed-order reduction over the outer index keeps the sum deterministic
    let slabs: Vec<f64> = (0..order)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut acc = 0.0;
            for j in 0..order {
                for l in 0..order {
                    let p = site.center
                        + Vector3::new(
                            site.sigma.x * t[i],
                            site.sigma.y * t[j],
                            site.sigma.z * t[l],
                        );
                    acc += w[j] * w[l] * eval.sample(&p)?.total;
                }
            }
            Ok(w[i] * acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(slabs.iter().sum::<f64>() / norm)
}

/// Site-averaged V_RF (Hartree) for the two spin states of a plaquette atom.
///
/// The |1> site sits on the x axis at the outermost antinode of the state's
/// leading component; the |0> site is displaced from it by `separation_nm`
/// along the lattice axis z. Widths are the isotropic mode widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitInteractions {
    pub site_nm: f64,
    pub v1: f64,
    pub v0: f64,
}

pub fn qubit_site_interactions(
    eval: &RfEvaluator,
    sigma1_nm: f64,
    sigma0_nm: f64,
    separation_nm: f64,
) -> Result<QubitInteractions> {
    let site_nm = units::bohr_to_nm(eval.state.outermost_antinode());
    let s1 = SiteDensity::from_nm(Vector3::new(site_nm, 0.0, 0.0), Vector3::repeat(sigma1_nm));
    let s0 = SiteDensity::from_nm(
        Vector3::new(site_nm, 0.0, separation_nm),
        Vector3::repeat(sigma0_nm),
    );
    Ok(QubitInteractions {
        site_nm,
        v1: site_averaged_interaction(eval, &s1)?,
        v0: site_averaged_interaction(eval, &s0)?,
    })
}
