//! Raman transfer between the two qubit traps through the motional levels of
//! an intermediate trap, and its adiabatic-elimination reduction.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::dynamics::{self, CMatrix, CVector};
use crate::error::{Error, Result};

use super::modes::FranckCondonTable;

/// Laser parameters. All frequencies share one angular unit; times are in
/// its inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanDrive {
    pub omega0: f64,
    pub omega1: f64,
    /// One-photon detuning from the intermediate level.
    pub big_delta: f64,
    /// Two-photon detuning.
    pub delta: f64,
    pub n_levels: usize,
}

impl RamanDrive {
    pub fn validate(&self, omega_tr: f64) -> Result<()> {
        if self.n_levels == 0 {
            return Err(Error::config("lattice.n_levels", "must be >= 1"));
        }
        for j in 0..self.n_levels {
            let offset = self.big_delta - (j as f64 + 0.5) * omega_tr;
            if offset == 0.0 {
                return Err(Error::config(
                    "Delta",
                    format!("one-photon detuning is resonant with intermediate level {j}"),
                ));
            }
        }
        Ok(())
    }
}

/// Two-level parameters after eliminating the intermediate levels.
///
/// `omega_eff` is the coupling between |0> and |1>; the population transfers
/// fully after pi / (2 omega_eff).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTwoLevel {
    pub omega_eff: f64,
    pub delta_eff: f64,
}

impl EffectiveTwoLevel {
    pub fn transfer_time(&self) -> f64 {
        std::f64::consts::PI / (2.0 * self.omega_eff.abs())
    }

    /// Probability in |1> after time t starting from |0>.
    pub fn transfer_probability(&self, t: f64) -> f64 {
        let g = self.omega_eff;
        let w = (g * g + self.delta_eff * self.delta_eff / 4.0).sqrt();
        if w == 0.0 {
            return 0.0;
        }
        g * g / (w * w) * (w * t).sin().powi(2)
    }
}

/// Closed-form reduction without the validity check.
pub fn effective_two_level_unchecked(
    drive: &RamanDrive,
    table: &FranckCondonTable,
) -> EffectiveTwoLevel {
    let n = drive.n_levels.min(table.n_levels());
    let f: f64 = (0..n).map(|j| table.f0[j] * table.f1[j]).sum();
    let shifts: f64 = (0..n)
        .map(|j| {
            table.f1[j].powi(2) * drive.omega1.powi(2) - table.f0[j].powi(2) * drive.omega0.powi(2)
        })
        .sum();
    EffectiveTwoLevel {
        omega_eff: drive.omega0 * drive.omega1 / (4.0 * drive.big_delta) * f,
        delta_eff: drive.delta - shifts / (4.0 * drive.big_delta),
    }
}

/// Closed-form reduction. Fails with `ValidityWarning` when the one-photon
/// detuning is not large against the motional ladder.
pub fn effective_two_level(
    drive: &RamanDrive,
    table: &FranckCondonTable,
    omega_tr: f64,
) -> Result<EffectiveTwoLevel> {
    drive.validate(omega_tr)?;
    let threshold = 10.0 * (drive.n_levels as f64 + 0.5) * omega_tr;
    if drive.big_delta.abs() < threshold {
        return Err(Error::ValidityWarning {
            delta: drive.big_delta,
            threshold,
        });
    }
    Ok(effective_two_level_unchecked(drive, table))
}

/// The (n+2)-level rotating-wave matrix M in the basis
/// {|0>, |1>, |p_0>, ..., |p_{n-1}>}, with dC/dt = i M C.
pub fn raman_matrix(drive: &RamanDrive, table: &FranckCondonTable, omega_tr: f64) -> CMatrix {
    let n = drive.n_levels.min(table.n_levels());
    let dim = n + 2;
    let mut m = CMatrix::zeros(dim, dim);
    m[(1, 1)] = Complex64::new(drive.delta, 0.0);
    for j in 0..n {
        let c0 = Complex64::new(table.f0[j] * drive.omega0 / 2.0, 0.0);
        let c1 = Complex64::new(table.f1[j] * drive.omega1 / 2.0, 0.0);
        m[(0, j + 2)] = c0;
        m[(j + 2, 0)] = c0;
        m[(1, j + 2)] = c1;
        m[(j + 2, 1)] = c1;
        m[(j + 2, j + 2)] = Complex64::new(drive.big_delta - (j as f64 + 0.5) * omega_tr, 0.0);
    }
    m
}

/// Amplitudes over {|0>, |1>, |p_0>, ...} after time `t`.
pub fn raman_dynamics(
    drive: &RamanDrive,
    table: &FranckCondonTable,
    omega_tr: f64,
    psi0: &[Complex64],
    t: f64,
) -> Result<Vec<Complex64>> {
    drive.validate(omega_tr)?;
    let m = raman_matrix(drive, table, omega_tr);
    if psi0.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: psi0.len(),
        });
    }
    let norm: f64 = psi0.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::config("psi0", "initial state must be normalized"));
    }
    // dC/dt = i M C is i dC/dt = -M C
    let psi = dynamics::propagate(&(-m), &CVector::from_column_slice(psi0), t)?;
    Ok(psi.iter().copied().collect())
}

/// Initial state |0> for a drive with `n_levels` intermediate levels.
pub fn ground_state(n_levels: usize) -> Vec<Complex64> {
    let mut v = DVector::<Complex64>::zeros(n_levels + 2);
    v[0] = Complex64::new(1.0, 0.0);
    v.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta_table(n: usize) -> FranckCondonTable {
        let mut f = vec![0.0; n];
        f[0] = 1.0;
        FranckCondonTable::from_overlaps(f.clone(), f)
    }

    #[test]
    fn single_term_closed_form() {
        let drive = RamanDrive {
            omega0: 3.0,
            omega1: 3.0,
            big_delta: 500.0,
            delta: 0.2,
            n_levels: 4,
        };
        let e = effective_two_level(&drive, &delta_table(4), 1.0).unwrap();
        assert!((e.omega_eff - 9.0 / 2000.0).abs() < 1e-15);
        assert_eq!(e.delta_eff, 0.2);
    }

    #[test]
    fn validity_flag() {
        let drive = RamanDrive {
            omega0: 1.0,
            omega1: 1.0,
            big_delta: 20.0,
            delta: 0.0,
            n_levels: 4,
        };
        assert!(matches!(
            effective_two_level(&drive, &delta_table(4), 1.0),
            Err(Error::ValidityWarning { .. })
        ));
    }

    #[test]
    fn undriven_state_keeps_populations() {
        let drive = RamanDrive {
            omega0: 0.0,
            omega1: 0.0,
            big_delta: 50.0,
            delta: 0.7,
            n_levels: 3,
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi0 = vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, s),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let psi = raman_dynamics(&drive, &delta_table(3), 1.0, &psi0, 3.3).unwrap();
        for (a, b) in psi.iter().zip(&psi0) {
            assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-13);
        }
        assert!((psi[1] - psi0[1] * Complex64::from_polar(1.0, 0.7 * 3.3)).norm() < 1e-12);
    }
}
