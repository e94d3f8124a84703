//! Rydberg-electron scattering off ground-state atoms.

pub mod map;
pub mod model;
pub mod pec;
pub mod potential;

pub use map::{cell_center, interaction_map, CellStatus, InteractionMap, MapCell, MapPlane};
pub use model::{
    local_momentum, momentum_at_energy, phase_shifts, ElectronMomentum, PhaseShifts, Regime,
    ScatteringModel, K_MIN,
};
pub use pec::{pec, PecBasis, PecCurves, PecSystem};
pub use potential::{
    gauss_hermite, qubit_site_interactions, site_averaged_interaction, v_rf, InteractionSample,
    QubitInteractions, RfEvaluator, SiteDensity,
};
