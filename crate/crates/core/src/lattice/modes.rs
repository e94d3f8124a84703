//! Harmonic Wannier modes and Franck-Condon overlaps between them.

use crate::error::{Error, Result};
use crate::units;

use super::potential::{Curve, LatticeConfig};

/// A harmonic-oscillator eigenstate approximating a lattice-site Wannier
/// function along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WannierMode {
    pub center_nm: f64,
    /// Trap angular frequency, rad/s.
    pub omega: f64,
    /// sqrt(hbar / (m omega)), nm: the 1/e half-width of the ground-state density.
    pub sigma_nm: f64,
    pub n: u32,
    pub mass_amu: f64,
}

impl WannierMode {
    pub fn new(center_nm: f64, omega: f64, mass_amu: f64, n: u32) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::config("omega", "trap frequency must be > 0"));
        }
        let sigma_m = (units::HBAR / (mass_amu * units::AMU_KG * omega)).sqrt();
        Ok(Self {
            center_nm,
            omega,
            sigma_nm: sigma_m * 1e9,
            n,
            mass_amu,
        })
    }

    /// The same trap in motional state `n`.
    pub fn excited(&self, n: u32) -> Self {
        Self { n, ..*self }
    }
}

/// Ground mode in the well of `curve` that contains `near_nm`.
pub fn lattice_mode(config: &LatticeConfig, curve: Curve, near_nm: f64) -> Result<WannierMode> {
    let quarter = config.wavelength_nm / 4.0;
    harmonic_mode(
        |z| config.value(curve, z),
        near_nm - quarter,
        near_nm + quarter,
        config.mass_amu,
    )
}

const POSITION_TOL_NM: f64 = 1e-4;

/// Locate the minimum of `potential` (E/hbar in rad/s, z in nm) inside
/// [lo, hi] and expand harmonically: omega = sqrt(V''/m).
pub fn harmonic_mode(
    potential: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    mass_amu: f64,
) -> Result<WannierMode> {
    if !(lo < hi) {
        return Err(Error::NoMinimumFound("empty search interval".into()));
    }
    // coarse scan picks the basin, golden-section search refines it
    let samples = 400;
    let h = (hi - lo) / samples as f64;
    let (mut best_i, mut best_v) = (0usize, f64::INFINITY);
    for i in 0..=samples {
        let v = potential(lo + i as f64 * h);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == samples {
        return Err(Error::NoMinimumFound(format!(
            "potential decreases towards the edge of [{lo}, {hi}] nm"
        )));
    }
    let mut a = lo + (best_i - 1) as f64 * h;
    let mut b = lo + (best_i + 1) as f64 * h;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (potential(c), potential(d));
    while b - a > POSITION_TOL_NM * 1e-2 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = potential(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = potential(d);
        }
    }
    let z0 = 0.5 * (a + b);

    // five-point second derivative, step small against the lattice period
    let s = ((hi - lo) * 1e-3).max(1e-3);
    let curvature = (-potential(z0 + 2.0 * s) + 16.0 * potential(z0 + s) - 30.0 * potential(z0)
        + 16.0 * potential(z0 - s)
        - potential(z0 - 2.0 * s))
        / (12.0 * s * s);
    if !(curvature > 0.0) {
        return Err(Error::NegativeCurvature {
            z_nm: z0,
            curvature,
        });
    }
    // V'' in J/m^2 = hbar * curvature [rad/s / nm^2] * 1e18
    let spring = units::HBAR * curvature * 1e18;
    let omega = (spring / (mass_amu * units::AMU_KG)).sqrt();
    WannierMode::new(z0, omega, mass_amu, 0)
}

/// Overlaps <m_a | n_b> for all m <= m_max, n <= n_max between oscillator
/// eigenstates of two displaced traps with widths sigma_a, sigma_b.
///
/// Built from the Gaussian overlap <0|0> by ladder-operator recurrences:
/// row 0 from a_A = alpha a_B + beta a_B^dagger + gamma_a, then each column
/// upward in m from a_B = alpha a_A - beta a_A^dagger + gamma_b. Neither
/// step reaches past n_max, which keeps high-index entries accurate.
pub fn overlap_table(
    center_a: f64,
    sigma_a: f64,
    center_b: f64,
    sigma_b: f64,
    m_max: usize,
    n_max: usize,
) -> Vec<Vec<f64>> {
    let (sa, sb) = (sigma_a, sigma_b);
    let d = center_b - center_a;
    let alpha = 0.5 * (sb / sa + sa / sb);
    let beta = 0.5 * (sb / sa - sa / sb);
    let gamma_a = d / (2f64.sqrt() * sa);
    let gamma_b = -d / (2f64.sqrt() * sb);
    let mut t = vec![vec![0.0; n_max + 1]; m_max + 1];

    let s2 = sa * sa + sb * sb;
    t[0][0] = (2.0 * sa * sb / s2).sqrt() * (-d * d / (2.0 * s2)).exp();
    // <0_A| a_A^dagger |n_B> = 0
    for n in 0..n_max {
        let nf = n as f64;
        let prev = if n > 0 { t[0][n - 1] } else { 0.0 };
        t[0][n + 1] = -(beta * nf.sqrt() * prev + gamma_a * t[0][n]) / (alpha * (nf + 1.0).sqrt());
    }
    // <m_A| a_B |n_B> = sqrt(n) <m_A|(n-1)_B>
    for n in 0..=n_max {
        let nf = n as f64;
        for m in 0..m_max {
            let mf = m as f64;
            let left = if n > 0 { nf.sqrt() * t[m][n - 1] } else { 0.0 };
            let below = if m > 0 { mf.sqrt() * t[m - 1][n] } else { 0.0 };
            t[m + 1][n] = (left + beta * below - gamma_b * t[m][n]) / (alpha * (mf + 1.0).sqrt());
        }
    }
    t
}

/// Analytic overlap of two (possibly displaced, different-frequency) modes.
pub fn franck_condon(a: &WannierMode, b: &WannierMode) -> f64 {
    let t = overlap_table(
        a.center_nm,
        a.sigma_nm,
        b.center_nm,
        b.sigma_nm,
        a.n as usize,
        b.n as usize,
    );
    t[a.n as usize][b.n as usize]
}

/// Overlaps of the two qubit ground modes with the intermediate trap levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FranckCondonTable {
    /// f0[n] = <w_0 | p_n>.
    pub f0: Vec<f64>,
    /// f1[n] = <w_1 | p_n>.
    pub f1: Vec<f64>,
    /// sum_n f0[n] f1[n].
    pub effective_f: f64,
    /// sum_n |f0[n] f1[n]|, the value obtained when the overlap signs are ignored.
    pub magnitude_f: f64,
}

impl FranckCondonTable {
    pub fn from_overlaps(f0: Vec<f64>, f1: Vec<f64>) -> Self {
        let effective_f = f0.iter().zip(&f1).map(|(a, b)| a * b).sum();
        let magnitude_f = f0.iter().zip(&f1).map(|(a, b)| (a * b).abs()).sum();
        Self {
            f0,
            f1,
            effective_f,
            magnitude_f,
        }
    }

    pub fn n_levels(&self) -> usize {
        self.f0.len()
    }
}

/// The intermediate trap: center (nm) and angular frequency (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermediateTrap {
    pub center_nm: f64,
    pub omega: f64,
}

/// f_{0n}, f_{1n} for the lowest `n_levels` intermediate states, without the
/// cutoff-convergence check.
pub fn franck_condon_table(
    qubit0: &WannierMode,
    qubit1: &WannierMode,
    trap: IntermediateTrap,
    n_levels: usize,
) -> Result<FranckCondonTable> {
    if n_levels == 0 {
        return Err(Error::config("lattice.n_levels", "must be >= 1"));
    }
    let p = WannierMode::new(trap.center_nm, trap.omega, qubit0.mass_amu, 0)?;
    let row = |q: &WannierMode| {
        overlap_table(
            q.center_nm,
            q.sigma_nm,
            p.center_nm,
            p.sigma_nm,
            0,
            n_levels - 1,
        )
        .swap_remove(0)
    };
    Ok(FranckCondonTable::from_overlaps(row(qubit0), row(qubit1)))
}

/// Like [`franck_condon_table`], failing with `CutoffTooSmall` when five more
/// intermediate levels change F by more than 1%.
pub fn effective_franck_condon(
    qubit0: &WannierMode,
    qubit1: &WannierMode,
    trap: IntermediateTrap,
    n_levels: usize,
) -> Result<FranckCondonTable> {
    let table = franck_condon_table(qubit0, qubit1, trap, n_levels)?;
    let wider = franck_condon_table(qubit0, qubit1, trap, n_levels + 5)?;
    let (before, after) = (table.effective_f, wider.effective_f);
    if (after - before).abs() > 0.01 * after.abs().max(before.abs()) {
        return Err(Error::CutoffTooSmall { before, after });
    }
    Ok(table)
}

/// floor(U/omega): the number of levels the trap holds in the harmonic picture.
pub fn default_n_levels(depth: f64, omega: f64) -> usize {
    ((depth / omega).floor() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermite_function(n: usize, x: f64) -> f64 {
        // normalized, by the standard stable recurrence
        let mut p0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
        if n == 0 {
            return p0;
        }
        let mut p1 = 2f64.sqrt() * x * p0;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = (2.0 / kf).sqrt() * x * p1 - ((kf - 1.0) / kf).sqrt() * p0;
            p0 = p1;
            p1 = p2;
        }
        p1
    }

    fn numeric_overlap(ca: f64, sa: f64, m: usize, cb: f64, sb: f64, n: usize) -> f64 {
        let (lo, hi) = (
            ca.min(cb) - 20.0 * sa.max(sb),
            ca.max(cb) + 20.0 * sa.max(sb),
        );
        let steps = 200_000;
        let h = (hi - lo) / steps as f64;
        (0..=steps)
            .map(|i| {
                let x = lo + i as f64 * h;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                w * hermite_function(m, (x - ca) / sa) / sa.sqrt()
                    * hermite_function(n, (x - cb) / sb)
                    / sb.sqrt()
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn recurrence_matches_quadrature() {
        let t = overlap_table(3.0, 17.0, 40.0, 25.0, 6, 9);
        for m in 0..=6 {
            for n in 0..=9 {
                let q = numeric_overlap(3.0, 17.0, m, 40.0, 25.0, n);
                assert!(
                    (t[m][n] - q).abs() < 1e-9,
                    "m={m} n={n}: {} vs {q}",
                    t[m][n]
                );
            }
        }
    }

    #[test]
    fn closed_form_cases() {
        let a = WannierMode::new(0.0, 2.0 * std::f64::consts::PI * 50e3, 87.0, 0).unwrap();
        assert!((franck_condon(&a, &a) - 1.0).abs() < 1e-12);
        assert!(franck_condon(&a, &a.excited(1)).abs() < 1e-15);
        let b = WannierMode {
            center_nm: 2.0 * a.sigma_nm,
            ..a
        };
        assert!((franck_condon(&a, &b) - (-1f64).exp()).abs() < 1e-12);
        let c = WannierMode::new(30.0, 2.0 * std::f64::consts::PI * 80e3, 87.0, 3).unwrap();
        assert!(
            (franck_condon(&a.excited(2), &c) - franck_condon(&c, &a.excited(2))).abs() < 1e-12
        );
    }

    #[test]
    fn identical_traps_give_unit_f() {
        let q = WannierMode::new(10.0, 1e6, 87.0, 0).unwrap();
        let trap = IntermediateTrap {
            center_nm: 10.0,
            omega: 1e6,
        };
        let t = effective_franck_condon(&q, &q, trap, 4).unwrap();
        assert!((t.effective_f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_omega_consistency() {
        let m = WannierMode::new(0.0, 1.234e6, 132.9, 0).unwrap();
        let lhs = (m.sigma_nm * 1e-9).powi(2) * m.mass_amu * units::AMU_KG * m.omega;
        assert!((lhs / units::HBAR - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_widths() {
        let cases = [
            (87.0, 420.0, 10e6),
            (87.0, 800.0, 10e6),
            (133.0, 350.0, 20e6),
        ];
        for (mass, lambda, depth) in cases {
            let c = LatticeConfig::new(lambda, depth, 0.0, mass).unwrap();
            let m = lattice_mode(&c, Curve::Plus, lambda / 4.0).unwrap();
            let k = 2.0 * std::f64::consts::PI / (lambda * 1e-9);
            let omega = (2.0 * units::HBAR * c.depth * k * k / (mass * units::AMU_KG)).sqrt();
            assert!((m.omega / omega - 1.0).abs() < 1e-6);
            assert!((m.center_nm - lambda / 4.0).abs() < 1e-4);
        }
    }

    #[test]
    fn edge_minimum_is_reported() {
        assert!(matches!(
            harmonic_mode(|z| z, 0.0, 1.0, 87.0),
            Err(Error::NoMinimumFound(_))
        ));
        assert!(matches!(
            harmonic_mode(
                |z: f64| if (z - 0.5).abs() < 0.2 { 0.0 } else { 1.0 },
                0.0,
                1.0,
                87.0
            ),
            Err(Error::NegativeCurvature { .. })
        ));
    }
}
