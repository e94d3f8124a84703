//! Radial Rydberg wavefunctions by inward Numerov integration.
//!
//! The reduced radial function u(r) = r R(r) satisfies u'' = g(r) u with
//! g(r) = 2 (V(r) + l(l+1)/(2 r^2) - E). Alkali cores are described by a
//! parametric l-dependent model potential so that the inner (core) nodes are
//! present and the node count is n - l - 1; hydrogen uses the bare Coulomb
//! potential.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::defects::QuantumDefectTable;
use super::level::{level_energy, RydbergLevel, Species};

/// Minimum number of grid points per local de Broglie wavelength.
pub const POINTS_PER_WAVELENGTH: f64 = 20.0;

const RESCALE_THRESHOLD: f64 = 1e200;
const SEED_AMPLITUDE: f64 = 1e-30;

/// Uniform radial grid r_i = r_min + i * step, in Bohr radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, step: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && step > 0.0) || !r_max.is_finite() {
            return Err(Error::config(
                "radial_grid",
                format!("need 0 < r_min < r_max and step > 0 (got {r_min}, {r_max}, {step})"),
            ));
        }
        let grid = Self { r_min, r_max, step };
        if grid.len() < 16 {
            return Err(Error::config("radial_grid", "fewer than 16 grid points"));
        }
        if grid.len() > 50_000_000 {
            return Err(Error::config("radial_grid", "more than 5e7 grid points"));
        }
        Ok(grid)
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        ((self.r_max - self.r_min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.step
    }

    /// A grid sized for `level`: r_max beyond the outer turning point,
    /// r_min inside the core, and a step that resolves the fastest
    /// oscillation with margin over [`POINTS_PER_WAVELENGTH`].
    pub fn for_level(level: &RydbergLevel, defects: &QuantumDefectTable) -> Result<Self> {
        let energy = level_energy(level, defects);
        Self::for_potential(
            level.n,
            level.l,
            energy,
            CorePotential::for_species(level.species),
        )
    }

    /// Like [`RadialGrid::for_level`] for a zero-defect Coulomb level.
    pub fn for_hydrogenic(n: u32, l: u32) -> Result<Self> {
        let nf = f64::from(n);
        Self::for_potential(n, l, -0.5 / (nf * nf), CorePotential::Coulomb)
    }

    fn for_potential(n: u32, l: u32, energy: f64, potential: CorePotential) -> Result<Self> {
        let nf = f64::from(n);
        let r_max = (2.0 * nf * (nf + 15.0)).max(2.6 * nf * nf);
        let r_min = match potential {
            CorePotential::Coulomb => {
                // u ~ r^(l+1): the inner region carries no weight for l > 0
                if l == 0 {
                    1e-3
                } else {
                    (0.02 * f64::from(l * (l + 1))).min(1.0)
                }
            }
            CorePotential::Model(_) => 2e-3,
        };
        let k_max = max_local_wavenumber(&potential, l, energy, r_min, r_max);
        let step = (2.0 * PI / k_max / (1.25 * POINTS_PER_WAVELENGTH))
            .min(0.5)
            .min(0.002 * nf * nf);
        Self::new(r_min, r_max, step)
    }
}

/// Alkali model-potential parameters: Z_l(r) = 1 + (Z-1) e^{-a1 r} - r (a3 + a4 r) e^{-a2 r}
/// plus a core-polarization tail -alpha_c / (2 r^4) (1 - e^{-(r/r_c)^6}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPotential {
    pub charge: f64,
    pub alpha_core: f64,
    pub a1: [f64; 4],
    pub a2: [f64; 4],
    pub a3: [f64; 4],
    pub a4: [f64; 4],
    pub r_c: [f64; 4],
}

// Marinescu, Sadeghpour, Dalgarno, PRA 49, 982 (1994).
const RB_MODEL: ModelPotential = ModelPotential {
    charge: 37.0,
    alpha_core: 9.0760,
    a1: [3.69628474, 4.44088978, 3.78717363, 2.39848933],
    a2: [1.64915255, 1.92828831, 1.57027864, 1.76810544],
    a3: [-9.86069196, -16.79597770, -11.65588970, -12.07106780],
    a4: [0.19579987, -0.81633314, 0.52942835, 0.77256589],
    r_c: [1.66242117, 1.50195124, 4.86851938, 4.79831327],
};

const CS_MODEL: ModelPotential = ModelPotential {
    charge: 55.0,
    alpha_core: 15.6440,
    a1: [3.49546309, 4.69366096, 4.32466196, 3.01048361],
    a2: [1.47533800, 1.71398344, 1.61365288, 1.40000001],
    a3: [-9.72143084, -24.65624280, -6.70128850, -3.20036138],
    a4: [0.02629242, -0.09543125, -0.74095193, 0.00034538],
    r_c: [1.92046930, 2.13383095, 0.93007296, 1.99969677],
};

/// Central potential felt by the valence electron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorePotential {
    Coulomb,
    Model(ModelPotential),
}

impl CorePotential {
    pub fn for_species(species: Species) -> Self {
        match species {
            Species::H => CorePotential::Coulomb,
            Species::Rb => CorePotential::Model(RB_MODEL),
            Species::Cs => CorePotential::Model(CS_MODEL),
        }
    }

    /// V(r) without the centrifugal term.
    pub fn value(&self, l: u32, r: f64) -> f64 {
        match self {
            CorePotential::Coulomb => -1.0 / r,
            CorePotential::Model(p) => {
                let i = (l as usize).min(3);
                let z = 1.0 + (p.charge - 1.0) * (-p.a1[i] * r).exp()
                    - r * (p.a3[i] + p.a4[i] * r) * (-p.a2[i] * r).exp();
                let r4 = r * r * r * r;
                let pol = -p.alpha_core / (2.0 * r4) * (1.0 - (-(r / p.r_c[i]).powi(6)).exp());
                -z / r + pol
            }
        }
    }
}

fn g_coefficient(potential: &CorePotential, l: u32, energy: f64, r: f64) -> f64 {
    let lf = f64::from(l);
    2.0 * (potential.value(l, r) + lf * (lf + 1.0) / (2.0 * r * r) - energy)
}

fn max_local_wavenumber(
    potential: &CorePotential,
    l: u32,
    energy: f64,
    r_min: f64,
    r_max: f64,
) -> f64 {
    // log-spaced scan; the kinetic energy peaks near the inner edge
    let samples = 4000;
    let (lo, hi) = (r_min.ln(), r_max.ln());
    (0..=samples)
        .map(|i| (lo + (hi - lo) * i as f64 / samples as f64).exp())
        .map(|r| -g_coefficient(potential, l, energy, r))
        .fold(0.0_f64, f64::max)
        .max(1e-12)
        .sqrt()
}

/// u(r) = r R(r) sampled on a uniform grid, normalized to unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialWavefunction {
    pub level: RydbergLevel,
    pub grid: RadialGrid,
    /// Binding energy used for the integration, Hartree.
    pub energy: f64,
    pub values: Vec<f64>,
    pub norm_checked: bool,
}

/// Integrate the radial equation for `level` with its species model potential.
pub fn radial_wavefunction(
    level: &RydbergLevel,
    defects: &QuantumDefectTable,
    grid: &RadialGrid,
) -> Result<RadialWavefunction> {
    let energy = level_energy(level, defects);
    solve(
        level,
        energy,
        CorePotential::for_species(level.species),
        grid,
    )
}

/// Zero-defect Coulomb solution used for hydrogenic manifold members.
pub fn hydrogenic_wavefunction(
    level: &RydbergLevel,
    grid: &RadialGrid,
) -> Result<RadialWavefunction> {
    let n = f64::from(level.n);
    solve(level, -0.5 / (n * n), CorePotential::Coulomb, grid)
}

fn solve(
    level: &RydbergLevel,
    energy: f64,
    potential: CorePotential,
    grid: &RadialGrid,
) -> Result<RadialWavefunction> {
    let n = f64::from(level.n);
    if grid.r_max < 2.5 * n * n {
        return Err(Error::GridTooCoarse(format!(
            "r_max = {} a.u. is inside 2.5 n^2 = {} a.u.",
            grid.r_max,
            2.5 * n * n
        )));
    }
    let len = grid.len();
    let h = grid.step;
    let l = level.l;
    let g: Vec<f64> = (0..len)
        .map(|i| g_coefficient(&potential, l, energy, grid.r(i)))
        .collect();

    let k_max = g.iter().fold(0.0_f64, |acc, &gi| acc.max(-gi)).sqrt();
    if k_max > 0.0 {
        let points = 2.0 * PI / k_max / h;
        if points < POINTS_PER_WAVELENGTH {
            return Err(Error::GridTooCoarse(format!(
                "{points:.1} points per local wavelength, need {POINTS_PER_WAVELENGTH}"
            )));
        }
    }

    // innermost contiguous classically forbidden region, where the irregular
    // solution takes over when integrating inward
    let forbidden_inner = g.iter().position(|&gi| gi <= 0.0).unwrap_or(len);

    let f: Vec<f64> = g.iter().map(|&gi| h * h * gi / 12.0).collect();
    let mut u = vec![0.0; len];
    u[len - 1] = SEED_AMPLITUDE;
    let kappa_last = g[len - 1].max(0.0).sqrt();
    let kappa_prev = g[len - 2].max(0.0).sqrt();
    let wkb_ratio = if g[len - 1] > 0.0 && g[len - 2] > 0.0 {
        (g[len - 1] / g[len - 2]).powf(0.25) * (0.5 * h * (kappa_last + kappa_prev)).exp()
    } else {
        1.0
    };
    u[len - 2] = SEED_AMPLITUDE * wkb_ratio;

    let mut cut = 0usize;
    for i in (1..len - 1).rev() {
        let next =
            (2.0 * (1.0 + 5.0 * f[i]) * u[i] - (1.0 - f[i + 1]) * u[i + 1]) / (1.0 - f[i - 1]);
        if !next.is_finite() {
            return Err(Error::DivergedIntegration { r: grid.r(i - 1) });
        }
        // inside the inner forbidden region the regular solution decays
        // monotonically inward; growth or a sign flip is the irregular one
        if i - 1 < forbidden_inner && (next.abs() > u[i].abs() || next * u[i] < 0.0) {
            cut = i;
            break;
        }
        u[i - 1] = next;
        if next.abs() > RESCALE_THRESHOLD {
            for v in &mut u[i - 1..] {
                *v /= RESCALE_THRESHOLD;
            }
        }
    }
    for v in &mut u[..cut] {
        *v = 0.0;
    }

    let norm = trapezoid_sq(&u, h).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::DivergedIntegration { r: grid.r_min });
    }
    for v in &mut u {
        *v /= norm;
    }
    let norm_checked = (trapezoid_sq(&u, h) - 1.0).abs() < 1e-6;

    Ok(RadialWavefunction {
        level: *level,
        grid: *grid,
        energy,
        values: u,
        norm_checked,
    })
}

pub(crate) fn trapezoid_sq(u: &[f64], h: f64) -> f64 {
    let n = u.len();
    let interior: f64 = u[1..n - 1].iter().map(|v| v * v).sum();
    h * (interior + 0.5 * (u[0] * u[0] + u[n - 1] * u[n - 1]))
}

impl RadialWavefunction {
    pub fn norm(&self) -> f64 {
        trapezoid_sq(&self.values, self.grid.step)
    }

    /// Number of sign changes of u(r) on the grid.
    pub fn node_count(&self) -> usize {
        let mut last_sign = 0i8;
        let mut nodes = 0;
        for &v in &self.values {
            let s = if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            };
            if s != 0 {
                if last_sign != 0 && s != last_sign {
                    nodes += 1;
                }
                last_sign = s;
            }
        }
        nodes
    }

    /// Radius (a.u.) of the outermost local maximum of |u|.
    pub fn outermost_antinode(&self) -> f64 {
        let u = &self.values;
        let h = self.grid.step;
        let peak = (1..u.len() - 1)
            .rev()
            .find(|&i| u[i].abs() >= u[i - 1].abs() && u[i].abs() > u[i + 1].abs())
            .unwrap_or(u.len() / 2);
        // parabolic refinement through the three samples
        let (a, b, c) = (u[peak - 1].abs(), u[peak].abs(), u[peak + 1].abs());
        let denom = a - 2.0 * b + c;
        let shift = if denom.abs() > 0.0 {
            0.5 * (a - c) / denom
        } else {
            0.0
        };
        self.grid.r(peak) + shift.clamp(-0.5, 0.5) * h
    }

    /// Radii (a.u.) of the sign changes of u, located by linear interpolation.
    pub fn nodes(&self) -> Vec<f64> {
        let u = &self.values;
        let mut out = Vec::new();
        for i in 0..u.len() - 1 {
            if u[i] != 0.0 && u[i + 1] != 0.0 && u[i].signum() != u[i + 1].signum() {
                let t = u[i] / (u[i] - u[i + 1]);
                out.push(self.grid.r(i) + t * self.grid.step);
            }
        }
        out
    }

    /// u(r) and du/dr by cubic Hermite interpolation with fourth-order
    /// finite-difference slopes. Zero outside the grid.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let grid = &self.grid;
        let n = self.values.len();
        if !(r >= grid.r_min && r <= grid.r(n - 1)) {
            return (0.0, 0.0);
        }
        let x = (r - grid.r_min) / grid.step;
        let i = (x.floor() as usize).min(n - 2);
        let t = x - i as f64;
        let h = grid.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slope(i) * h, self.slope(i + 1) * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        let deriv = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * d1)
            / h;
        (value, deriv)
    }

    fn slope(&self, i: usize) -> f64 {
        let u = &self.values;
        let h = self.grid.step;
        let n = u.len();
        if i >= 2 && i + 2 < n {
            (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h)
        } else if i >= 1 && i + 1 < n {
            (u[i + 1] - u[i - 1]) / (2.0 * h)
        } else if i == 0 {
            (u[1] - u[0]) / h
        } else {
            (u[n - 1] - u[n - 2]) / h
        }
    }
}
