//! Potential-energy curves: the basis-set Hamiltonian H0 + sum_i V_RF^(i)
//! diagonalized along a sweep of ground-atom separations.

use nalgebra::{DMatrix, DVector, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::atomic::{
    level_energy, Orbital, QuantumDefectTable, RydbergLevel, SphericalHarmonics, SpinorPoint,
    WavefunctionCache,
};
use crate::error::{Error, Result};

use super::model::{momentum_at_energy, phase_shifts, ScatteringModel};
use super::potential::contact_prefactors;

/// States spanning the PEC Hamiltonian. The first state is the target level
/// whose energy sets the electron wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct PecBasis {
    pub states: Vec<RydbergLevel>,
    pub truncation: usize,
}

impl PecBasis {
    pub fn new(states: Vec<RydbergLevel>, truncation: usize) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::config("pec.basis", "basis is empty"));
        }
        if truncation == 0 {
            return Err(Error::config("pec.truncation", "must be >= 1"));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::config("pec.basis", format!("duplicate state {s}")));
            }
        }
        if states.len() > truncation {
            return Err(Error::BasisTooLarge {
                size: states.len(),
                limit: truncation,
            });
        }
        Ok(Self { states, truncation })
    }

    /// `target` plus every level of the same species with |E - E_target| <=
    /// `max_gap` (Hartree), l <= `max_l`, and 2 m_j in `two_mj` (all m_j when
    /// empty). Levels without a tabulated defect are hydrogenic.
    pub fn around(
        target: RydbergLevel,
        defects: &QuantumDefectTable,
        max_gap: f64,
        max_l: u32,
        two_mj: &[i32],
        truncation: usize,
    ) -> Result<Self> {
        let e0 = level_energy(&target, defects);
        let mut states = vec![target];
        let n_lo = target.n.saturating_sub(6).max(1);
        for n in n_lo..=target.n + 6 {
            for l in 0..n.min(max_l + 1) {
                for two_j in [2 * l + 1, (2 * l).wrapping_sub(1)] {
                    if two_j > 2 * l + 1 || (l == 0 && two_j != 1) {
                        continue;
                    }
                    for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                        if !two_mj.is_empty() && !two_mj.contains(&tm) {
                            continue;
                        }
                        let lvl = RydbergLevel::from_doubled(target.species, n, l, two_j, tm)?;
                        if lvl != target && (level_energy(&lvl, defects) - e0).abs() <= max_gap {
                            states.push(lvl);
                        }
                    }
                }
            }
        }
        Self::new(states, truncation)
    }
}

/// Eigenvalue curves over a separation sweep, Hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct PecCurves {
    pub separations: Vec<f64>,
    pub unperturbed: Vec<f64>,
    /// sorted[i][s]: s-th lowest eigenvalue at separation i.
    pub sorted: Vec<Vec<f64>>,
    /// adiabatic[i][c]: curve c at separation i, followed by eigenvector overlap.
    pub adiabatic: Vec<Vec<f64>>,
}

/// Basis orbitals prepared once and reused for every separation.
#[derive(Debug, Clone)]
pub struct PecSystem {
    pub orbitals: Vec<Orbital>,
    pub energies: Vec<f64>,
    pub model: ScatteringModel,
    pub strict: bool,
    l_max: usize,
}

impl PecSystem {
    pub fn new(
        basis: &PecBasis,
        model: &ScatteringModel,
        defects: &QuantumDefectTable,
        cache: &WavefunctionCache,
        strict: bool,
    ) -> Result<Self> {
        model.validate()?;
        let orbitals = basis
            .states
            .par_iter()
            .map(|s| Orbital::new(*s, defects, None, cache))
            .collect::<Result<Vec<_>>>()?;
        let energies = basis
            .states
            .iter()
            .map(|s| level_energy(s, defects))
            .collect();
        let l_max = basis.states.iter().map(|s| s.l as usize).max().unwrap_or(0);
        Ok(Self {
            orbitals,
            energies,
            model: model.clone(),
            strict,
            l_max,
        })
    }

    /// H0 + sum over atoms of the contact couplings; atoms at the given
    /// Cartesian positions (a.u.).
    pub fn hamiltonian(&self, atoms: &[Vector3<f64>]) -> Result<DMatrix<Complex64>> {
        let n = self.orbitals.len();
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for (i, e) in self.energies.iter().enumerate() {
            h[(i, i)] = Complex64::new(*e, 0.0);
        }
        for pos in atoms {
            let k = momentum_at_energy(self.energies[0], pos.norm());
            let ps = phase_shifts(&self.model, k, self.strict)?;
            let (cs, cp) = contact_prefactors(&ps, k.k);
            let ylm = SphericalHarmonics::new(self.l_max + 1, pos);
            let values: Vec<SpinorPoint> = self
                .orbitals
                .iter()
                .map(|o| o.evaluate_with(pos, &ylm))
                .collect();
            for a in 0..n {
                for b in a..n {
                    let v = SpinorPoint::overlap(&values[a], &values[b]) * cs
                        + SpinorPoint::gradient_overlap(&values[a], &values[b]) * cp;
                    if a == b {
                        h[(a, a)] += Complex64::new(v.re, 0.0);
                    } else {
                        h[(a, b)] += v;
                        h[(b, a)] += v.conj();
                    }
                }
            }
        }
        Ok(h)
    }

    /// Sorted eigenvalues and matching eigenvectors.
    pub fn diagonalize(&self, atoms: &[Vector3<f64>]) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        let h = self.hamiltonian(atoms)?;
        if h.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NumericalError(
                "non-finite PEC matrix element".into(),
            ));
        }
        let n = h.nrows();
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalError(
                "eigensolver returned non-finite values".into(),
            ));
        }
        let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((values, vectors))
    }
}

/// Sweep the separation R: ground atoms sit at R * d_i for the direction
/// vectors `directions`.
pub fn pec(
    basis: &PecBasis,
    directions: &[Vector3<f64>],
    separations: &[f64],
    model: &ScatteringModel,
    defects: &QuantumDefectTable,
    cache: &WavefunctionCache,
    strict: bool,
) -> Result<PecCurves> {
    if basis.states.len() > basis.truncation {
        return Err(Error::BasisTooLarge {
            size: basis.states.len(),
            limit: basis.truncation,
        });
    }
    let system = PecSystem::new(basis, model, defects, cache, strict)?;
    let spectra = separations
        .par_iter()
        .map(|&r| {
            let atoms: Vec<Vector3<f64>> = directions.iter().map(|d| d * r).collect();
            system.diagonalize(&atoms)
        })
        .collect::<Result<Vec<_>>>()?;
    let sorted = spectra.iter().map(|(v, _)| v.clone()).collect();
    let adiabatic = follow_curves(&spectra);
    Ok(PecCurves {
        separations: separations.to_vec(),
        unperturbed: system.energies.clone(),
        sorted,
        adiabatic,
    })
}

/// Order eigenvalues into curves by maximal eigenvector overlap with the
/// previous separation (greedy assignment, largest overlaps first).
fn follow_curves(spectra: &[(Vec<f64>, DMatrix<Complex64>)]) -> Vec<Vec<f64>> {
    let Some((first_vals, first_vecs)) = spectra.first() else {
        return Vec::new();
    };
    let n = first_vals.len();
    let mut curves = vec![first_vals.clone()];
    let mut prev_vecs: Vec<DVector<Complex64>> =
        (0..n).map(|c| first_vecs.column(c).into_owned()).collect();
    for (vals, vecs) in &spectra[1..] {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
        for (c, pv) in prev_vecs.iter().enumerate() {
            for s in 0..n {
                pairs.push((pv.dotc(&vecs.column(s)).norm(), c, s));
            }
        }
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut taken_curve = vec![false; n];
        let mut taken_state = vec![false; n];
        let mut assign = vec![0usize; n];
        for (_, c, s) in pairs {
            if !taken_curve[c] && !taken_state[s] {
                taken_curve[c] = true;
                taken_state[s] = true;
                assign[c] = s;
            }
        }
        curves.push(assign.iter().map(|&s| vals[s]).collect());
        prev_vecs = assign
            .iter()
            .map(|&s| vecs.column(s).into_owned())
            .collect();
    }
    curves
}
