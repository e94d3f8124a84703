//! Spin-dependent optical lattice along one axis.
//!
//! Each circular component forms an intensity lattice
//! V_+-(z) = -U sin^2(kz +- theta), so the two lattices are displaced by
//! D = 2 theta / k. The qubit states see V_0 = (V_+ + 3 V_-)/4 and V_1 = V_+.
//! Energies are angular frequencies E/hbar in rad/s; positions in nm.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    pub wavelength_nm: f64,
    /// Depth as an angular frequency U/hbar, rad/s.
    pub depth: f64,
    /// Polarization half-angle, rad.
    pub theta: f64,
    pub mass_amu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Plus,
    Minus,
    Qubit0,
    Qubit1,
}

impl LatticeConfig {
    /// Depth given as U/2pi in Hz.
    pub fn new(
        wavelength_nm: f64,
        depth_over_2pi_hz: f64,
        theta: f64,
        mass_amu: f64,
    ) -> Result<Self> {
        if !(wavelength_nm > 0.0 && wavelength_nm.is_finite()) {
            return Err(Error::config("lattice.wavelength_nm", "must be > 0"));
        }
        if !(depth_over_2pi_hz > 0.0 && depth_over_2pi_hz.is_finite()) {
            return Err(Error::config("lattice.depth_over_2pi_Hz", "must be > 0"));
        }
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::config("lattice.theta_rad", "must lie in [0, pi/2)"));
        }
        if !(mass_amu > 0.0 && mass_amu.is_finite()) {
            return Err(Error::config("lattice.mass_amu", "must be > 0"));
        }
        Ok(Self {
            wavelength_nm,
            depth: 2.0 * PI * depth_over_2pi_hz,
            theta,
            mass_amu,
        })
    }

    /// Wavenumber 2 pi / lambda, 1/nm.
    pub fn k(&self) -> f64 {
        2.0 * PI / self.wavelength_nm
    }

    /// D = 2 theta / k, nm.
    pub fn displacement_nm(&self) -> f64 {
        2.0 * self.theta / self.k()
    }

    pub fn mass_kg(&self) -> f64 {
        self.mass_amu * units::AMU_KG
    }

    pub fn v_plus(&self, z_nm: f64) -> f64 {
        -self.depth * (self.k() * z_nm + self.theta).sin().powi(2)
    }

    pub fn v_minus(&self, z_nm: f64) -> f64 {
        -self.depth * (self.k() * z_nm - self.theta).sin().powi(2)
    }

    pub fn value(&self, curve: Curve, z_nm: f64) -> f64 {
        match curve {
            Curve::Plus | Curve::Qubit1 => self.v_plus(z_nm),
            Curve::Minus => self.v_minus(z_nm),
            Curve::Qubit0 => (self.v_plus(z_nm) + 3.0 * self.v_minus(z_nm)) / 4.0,
        }
    }

    /// Minimum of V_+ nearest `z_nm` in closed form.
    pub fn plus_minimum_near(&self, z_nm: f64) -> f64 {
        let period = self.wavelength_nm / 2.0;
        let base = (FRAC_PI_2 - self.theta) / self.k();
        base + ((z_nm - base) / period).round() * period
    }

    /// Minimum of V_- nearest `z_nm` in closed form.
    pub fn minus_minimum_near(&self, z_nm: f64) -> f64 {
        let period = self.wavelength_nm / 2.0;
        let base = (FRAC_PI_2 + self.theta) / self.k();
        base + ((z_nm - base) / period).round() * period
    }
}

/// Sampled lattice curves, in units of E/h MHz.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDependentPotential {
    pub z_nm: Vec<f64>,
    pub v_plus: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub v_qubit0: Vec<f64>,
    pub v_qubit1: Vec<f64>,
    pub displacement_nm: f64,
}

pub fn spin_potentials(config: &LatticeConfig, z_grid: &[f64]) -> Result<SpinDependentPotential> {
    if z_grid.len() < 2 {
        return Err(Error::config("z_grid", "need at least two points"));
    }
    let span = z_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - z_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    if span < config.wavelength_nm / 2.0 {
        return Err(Error::config(
            "z_grid",
            "grid must span at least one lattice period",
        ));
    }
    let to_mhz = |w: f64| w / (2.0 * PI) * 1e-6;
    let v_plus: Vec<f64> = z_grid.iter().map(|&z| to_mhz(config.v_plus(z))).collect();
    let v_minus: Vec<f64> = z_grid.iter().map(|&z| to_mhz(config.v_minus(z))).collect();
    let v_qubit0 = v_plus
        .iter()
        .zip(&v_minus)
        .map(|(p, m)| (p + 3.0 * m) / 4.0)
        .collect();
    let v_qubit1 = v_plus.clone();
    Ok(SpinDependentPotential {
        z_nm: z_grid.to_vec(),
        v_plus,
        v_minus,
        v_qubit0,
        v_qubit1,
        displacement_nm: config.displacement_nm(),
    })
}

impl SpinDependentPotential {
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("z_nm,V_plus_MHz,V_minus_MHz,V0_MHz,V1_MHz\n");
        for i in 0..self.z_nm.len() {
            let _ = writeln!(
                out,
                "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e}",
                self.z_nm[i], self.v_plus[i], self.v_minus[i], self.v_qubit0[i], self.v_qubit1[i]
            );
        }
        out
    }
}
