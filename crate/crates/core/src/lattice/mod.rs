//! Spin-dependent optical lattice, motional modes and Raman transfer.

mod modes;
mod potential;
mod raman;

pub use modes::{
    default_n_levels, effective_franck_condon, franck_condon, franck_condon_table, harmonic_mode,
    lattice_mode, overlap_table, FranckCondonTable, IntermediateTrap, WannierMode,
};
pub use potential::{spin_potentials, Curve, LatticeConfig, SpinDependentPotential};
pub use raman::{
    effective_two_level, effective_two_level_unchecked, ground_state, raman_dynamics, raman_matrix,
    EffectiveTwoLevel, RamanDrive,
};

use crate::error::Result;

/// Ground modes of the two qubit states along the lattice axis.
///
/// |1> sits in the V_+ well nearest a quarter period; |0> in the composite
/// well nearest that one, displaced along +z. With `separation_nm` given, the
/// |0> mode keeps its located frequency but is centered at that distance
/// from |1>.
pub fn qubit_modes(
    config: &LatticeConfig,
    separation_nm: Option<f64>,
) -> Result<(WannierMode, WannierMode)> {
    let z1 = config.plus_minimum_near(config.wavelength_nm / 4.0);
    let q1 = lattice_mode(config, Curve::Qubit1, z1)?;
    let guess = q1.center_nm + config.displacement_nm();
    let mut q0 = lattice_mode(config, Curve::Qubit0, guess)?;
    if let Some(d) = separation_nm {
        q0.center_nm = q1.center_nm + d;
    }
    Ok((q0, q1))
}

/// The intermediate trap used when none is configured: midway between the
/// qubit modes with the |1> trap frequency.
pub fn default_intermediate(q0: &WannierMode, q1: &WannierMode) -> IntermediateTrap {
    IntermediateTrap {
        center_nm: 0.5 * (q0.center_nm + q1.center_nm),
        omega: q1.omega,
    }
}
