//! Full spinor wavefunctions psi(r) = u(r)/r * (angular spinor) and their
//! gradients, evaluated at Cartesian points in atomic units.

use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::Result;

use super::angular::{
    angular_spinor, radial_times_ylm, SphericalGradient, SphericalHarmonics, SpinorAngularFunction,
};
use super::cache::WavefunctionCache;
use super::defects::QuantumDefectTable;
use super::level::RydbergLevel;
use super::radial::{RadialGrid, RadialWavefunction};
use super::superposition::RydbergSuperposition;

/// Cartesian point from cylindrical coordinates (z along the quantization axis).
pub fn cylindrical(rho: f64, phi: f64, z: f64) -> Vector3<f64> {
    Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
}

/// Spin-up and spin-down amplitudes with their gradients at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorPoint {
    pub up: Complex64,
    pub down: Complex64,
    pub grad_up: SphericalGradient,
    pub grad_down: SphericalGradient,
}

impl SpinorPoint {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            up: z,
            down: z,
            grad_up: SphericalGradient::zero(),
            grad_down: SphericalGradient::zero(),
        }
    }

    fn add_scaled(&mut self, o: &SpinorPoint, c: Complex64) {
        self.up += o.up * c;
        self.down += o.down * c;
        self.grad_up = self.grad_up.add(o.grad_up.scale(c));
        self.grad_down = self.grad_down.add(o.grad_down.scale(c));
    }

    /// |psi|^2 summed over spin.
    pub fn density(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// |grad psi|^2 summed over spin and axes.
    pub fn gradient_sqr(&self) -> f64 {
        self.grad_up.norm_sqr() + self.grad_down.norm_sqr()
    }

    /// psi_a^* psi_b summed over spin.
    pub fn overlap(a: &Self, b: &Self) -> Complex64 {
        a.up.conj() * b.up + a.down.conj() * b.down
    }

    /// grad psi_a^* . grad psi_b summed over spin.
    pub fn gradient_overlap(a: &Self, b: &Self) -> Complex64 {
        SphericalGradient::dot(&a.grad_up, &b.grad_up)
            + SphericalGradient::dot(&a.grad_down, &b.grad_down)
    }
}

/// One fine-structure level with its radial function attached.
#[derive(Debug, Clone)]
pub struct Orbital {
    pub level: RydbergLevel,
    pub radial: Arc<RadialWavefunction>,
    pub spinor: SpinorAngularFunction,
}

impl Orbital {
    pub fn new(
        level: RydbergLevel,
        defects: &QuantumDefectTable,
        grid: Option<&RadialGrid>,
        cache: &WavefunctionCache,
    ) -> Result<Self> {
        let radial = cache.get(&level, defects, grid)?;
        let spinor = angular_spinor(level.l, level.two_j(), level.two_mj())?;
        Ok(Self {
            level,
            radial,
            spinor,
        })
    }

    /// Evaluate with a harmonics table covering at least l + 1.
    pub fn evaluate_with(&self, point: &Vector3<f64>, ylm: &SphericalHarmonics) -> SpinorPoint {
        let r = point.norm();
        let (u, du) = self.radial.eval(r);
        if r <= 0.0 || (u == 0.0 && du == 0.0) {
            return SpinorPoint::zero();
        }
        let f = u / r;
        let df = du / r - u / (r * r);
        let s = &self.spinor;
        let (up, grad_up) = radial_times_ylm(ylm, s.l, s.up_harmonic.1, f, df, r);
        let (down, grad_down) = radial_times_ylm(ylm, s.l, s.down_harmonic.1, f, df, r);
        let cu = Complex64::new(s.up_coefficient, 0.0);
        let cd = Complex64::new(s.down_coefficient, 0.0);
        SpinorPoint {
            up: up * cu,
            down: down * cd,
            grad_up: grad_up.scale(cu),
            grad_down: grad_down.scale(cd),
        }
    }

    pub fn evaluate(&self, point: &Vector3<f64>) -> SpinorPoint {
        let ylm = SphericalHarmonics::new(self.level.l as usize + 1, point);
        self.evaluate_with(point, &ylm)
    }
}

/// Spin-resolved probability density at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub total: f64,
    pub spin_up: f64,
    pub spin_down: f64,
}

/// A superposition with all radial functions computed, ready for repeated
/// evaluation.
#[derive(Debug, Clone)]
pub struct PreparedState {
    pub components: Vec<(Orbital, Complex64)>,
    l_max: usize,
}

impl PreparedState {
    pub fn new(
        state: &RydbergSuperposition,
        defects: &QuantumDefectTable,
        grid: Option<&RadialGrid>,
        cache: &WavefunctionCache,
    ) -> Result<Self> {
        let components = state
            .components
            .iter()
            .map(|(level, amp)| Ok((Orbital::new(*level, defects, grid, cache)?, *amp)))
            .collect::<Result<Vec<_>>>()?;
        let l_max = components
            .iter()
            .map(|(o, _)| o.level.l as usize)
            .max()
            .unwrap_or(0);
        Ok(Self { components, l_max })
    }

    pub fn evaluate(&self, point: &Vector3<f64>) -> SpinorPoint {
        let ylm = SphericalHarmonics::new(self.l_max + 1, point);
        let mut acc = SpinorPoint::zero();
        for (orbital, amp) in &self.components {
            acc.add_scaled(&orbital.evaluate_with(point, &ylm), *amp);
        }
        acc
    }

    pub fn density(&self, point: &Vector3<f64>) -> Density {
        let p = self.evaluate(point);
        let spin_up = p.up.norm_sqr();
        let spin_down = p.down.norm_sqr();
        Density {
            total: spin_up + spin_down,
            spin_up,
            spin_down,
        }
    }

    /// Outermost antinode of the first component's radial function, a.u.
    pub fn outermost_antinode(&self) -> f64 {
        self.components[0].0.radial.outermost_antinode()
    }
}

/// Density of `state` at cylindrical (rho, phi, z), atomic units.
pub fn density(
    state: &RydbergSuperposition,
    point: (f64, f64, f64),
    defects: &QuantumDefectTable,
    grid: Option<&RadialGrid>,
) -> Result<Density> {
    let prepared = PreparedState::new(state, defects, grid, &WavefunctionCache::in_memory())?;
    Ok(prepared.density(&cylindrical(point.0, point.1, point.2)))
}
