use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::level::{RydbergLevel, Species};

/// Tolerance on theta_R - theta_B = pi/2 (mod pi), radians.
pub const POLARIZATION_TOLERANCE: f64 = 1e-9;

/// A normalized superposition of fine-structure Rydberg levels.
#[derive(Debug, Clone, PartialEq)]
pub struct RydbergSuperposition {
    pub components: Vec<(RydbergLevel, Complex64)>,
    /// (theta_R, theta_B) when built from polarization angles.
    pub polarization: Option<(f64, f64)>,
}

impl RydbergSuperposition {
    /// Normalizes the amplitudes; repeated levels are merged.
    pub fn new(components: Vec<(RydbergLevel, Complex64)>) -> Result<Self> {
        let mut merged: Vec<(RydbergLevel, Complex64)> = Vec::new();
        for (level, amp) in components {
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::config("amplitude", "non-finite amplitude"));
            }
            match merged.iter_mut().find(|(l, _)| *l == level) {
                Some((_, a)) => *a += amp,
                None => merged.push((level, amp)),
            }
        }
        let norm: f64 = merged.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::config("amplitude", "superposition has zero norm"));
        }
        for (_, a) in &mut merged {
            *a /= norm;
        }
        Ok(Self {
            components: merged,
            polarization: None,
        })
    }

    pub fn single(level: RydbergLevel) -> Self {
        Self {
            components: vec![(level, Complex64::new(1.0, 0.0))],
            polarization: None,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Amplitude of `level`, zero when absent.
    pub fn amplitude(&self, level: &RydbergLevel) -> Complex64 {
        self.components
            .iter()
            .find(|(l, _)| l == level)
            .map(|(_, a)| *a)
            .unwrap_or_default()
    }

    /// Total weight of components with the given 2 m_j.
    pub fn weight_with_two_mj(&self, two_mj: i32) -> f64 {
        self.components
            .iter()
            .filter(|(l, _)| l.two_mj() == two_mj)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn species(&self) -> Species {
        self.components[0].0.species
    }
}

/// The nD superposition prepared by two excitation beams with polarization
/// angles theta_R and theta_B.
///
/// Only theta_R - theta_B = pi/2 (mod pi) is supported: there the m_j = 1/2
/// paths interfere destructively and the state is
/// e^{is}|nD5/2, 5/2>/sqrt2 + e^{-is}(|nD5/2, -3/2> + |nD3/2, -3/2>)/2
/// with s = theta_R + theta_B.
pub fn superposition_from_polarizations(
    theta_r: f64,
    theta_b: f64,
    species: Species,
    n: u32,
) -> Result<RydbergSuperposition> {
    let difference = theta_r - theta_b;
    let offset = (difference - FRAC_PI_2).rem_euclid(PI);
    if !difference.is_finite() || offset.min(PI - offset) > POLARIZATION_TOLERANCE {
        return Err(Error::UnsupportedPolarization { difference });
    }
    let s = theta_r + theta_b;
    let d52_52 = RydbergLevel::from_doubled(species, n, 2, 5, 5)?;
    let d52_m32 = RydbergLevel::from_doubled(species, n, 2, 5, -3)?;
    let d32_m32 = RydbergLevel::from_doubled(species, n, 2, 3, -3)?;
    let plus = Complex64::from_polar(1.0, s);
    let minus = Complex64::from_polar(1.0, -s);
    Ok(RydbergSuperposition {
        components: vec![
            (d52_52, plus * std::f64::consts::FRAC_1_SQRT_2),
            (d52_m32, minus * 0.5),
            (d32_m32, minus * 0.5),
        ],
        polarization: Some((theta_r, theta_b)),
    })
}
