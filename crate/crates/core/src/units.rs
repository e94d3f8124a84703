//! Physical constants and unit conversions.
//!
//! The atomic-structure and scattering code works in Hartree atomic units.
//! Lattice quantities are kept in nm and rad/s, gate dynamics in rad/µs and µs.
//! Conversions happen at the boundaries only.

use std::f64::consts::PI;

/// Bohr radius in nm.
pub const BOHR_NM: f64 = 0.052_917_721_090_3;
/// Hartree energy expressed as a frequency (E/h) in MHz.
pub const HARTREE_MHZ: f64 = 6.579_683_920_502e9;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Atomic mass unit, kg.
pub const AMU_KG: f64 = 1.660_539_066_60e-27;

pub const RB87_MASS_AMU: f64 = 86.909_180_527;
pub const CS133_MASS_AMU: f64 = 132.905_451_961;

pub fn nm_to_bohr(nm: f64) -> f64 {
    nm / BOHR_NM
}

pub fn bohr_to_nm(a0: f64) -> f64 {
    a0 * BOHR_NM
}

/// Atomic energy unit to frequency E/h in MHz.
pub fn hartree_to_mhz(e: f64) -> f64 {
    e * HARTREE_MHZ
}

pub fn mhz_to_hartree(f_mhz: f64) -> f64 {
    f_mhz / HARTREE_MHZ
}

/// Frequency f (MHz) to angular frequency in rad/µs.
pub fn mhz_to_rad_per_us(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz
}

pub fn rad_per_us_to_mhz(w: f64) -> f64 {
    w / (2.0 * PI)
}

/// Angular frequency in rad/s to rad/µs.
pub fn rad_per_s_to_rad_per_us(w: f64) -> f64 {
    w * 1e-6
}
