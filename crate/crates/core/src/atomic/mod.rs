//! Rydberg levels, radial and angular wavefunctions, and superposition states.

pub mod angular;
pub mod cache;
pub mod defects;
pub mod level;
pub mod orbital;
pub mod radial;
pub mod superposition;

pub use angular::{angular_spinor, SphericalGradient, SphericalHarmonics, SpinorAngularFunction};
pub use cache::{parse_rwf1, write_rwf1, WavefunctionCache, CACHE_DIR_ENV};
pub use defects::QuantumDefectTable;
pub use level::{level_energy, RydbergLevel, Species};
pub use orbital::{cylindrical, density, Density, Orbital, PreparedState, SpinorPoint};
pub use radial::{hydrogenic_wavefunction, radial_wavefunction, RadialGrid, RadialWavefunction};
pub use superposition::{superposition_from_polarizations, RydbergSuperposition};
