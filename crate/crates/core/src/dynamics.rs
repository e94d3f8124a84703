//! Schrödinger propagation for small Hilbert spaces.
//!
//! Time-independent segments use a scaling-and-squaring Taylor exponential
//! whose order adapts to the requested tolerance; time-dependent
//! Hamiltonians use a fourth-order Magnus integrator with step doubling.
//! Convention: i dpsi/dt = H psi with hbar = 1.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest allowed deviation of U^dagger U from the identity (or of the norm
/// from one) after a decay-free propagation.
pub const UNITARITY_TOL: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// exp(-i H t) for a constant Hamiltonian.
pub fn evolution_operator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    check_square(h)?;
    if !t.is_finite() || h.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::IntegratorTolerance(
            "non-finite Hamiltonian or duration".into(),
        ));
    }
    let n = h.nrows();
    if n == 2 && is_hermitian(h) {
        return Ok(two_level_exponential(h, t));
    }
    let a = h * Complex64::new(0.0, -t);
    let norm = one_norm(&a);
    // scale so the Taylor argument has norm <= 1/2
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = &a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut u = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    let mut converged = false;
    for k in 1..=60 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        u += &term;
        if one_norm(&term) < 1e-18 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::IntegratorTolerance(
            "Taylor series did not converge".into(),
        ));
    }
    for _ in 0..squarings {
        u = &u * &u;
    }
    Ok(u)
}

fn is_hermitian(h: &CMatrix) -> bool {
    let n = h.nrows();
    (0..n).all(|i| (i..n).all(|j| h[(i, j)] == h[(j, i)].conj()))
}

/// Closed form for a 2x2 Hermitian H = m I + B.sigma.
fn two_level_exponential(h: &CMatrix, t: f64) -> CMatrix {
    let mean = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let half_diff = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let off = h[(0, 1)];
    let b = (half_diff * half_diff + off.norm_sqr()).sqrt();
    let phase = Complex64::from_polar(1.0, -mean * t);
    let (cos, sinc) = if b * t.abs() < 1e-8 {
        (
            1.0 - 0.5 * (b * t).powi(2),
            t * (1.0 - (b * t).powi(2) / 6.0),
        )
    } else {
        ((b * t).cos(), (b * t).sin() / b)
    };
    let mi = Complex64::new(0.0, -sinc);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            phase * (cos + mi * half_diff),
            phase * mi * off,
            phase * mi * off.conj(),
            phase * (cos - mi * half_diff),
        ],
    )
}

/// ||U^dagger U - I|| in the max-entry norm.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let g = u.adjoint() * u - CMatrix::identity(n, n);
    g.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_square(h: &CMatrix) -> Result<()> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    Ok(())
}

/// One step of a protocol.
#[derive(Debug, Clone)]
pub enum Step {
    /// Evolve under a constant Hamiltonian for `duration`.
    Evolve { h: CMatrix, duration: f64 },
    /// Apply an instantaneous unitary.
    Unitary(CMatrix),
}

/// A piecewise-constant pulse sequence.
#[derive(Debug, Clone, Default)]
pub struct PulseSequence {
    pub steps: Vec<Step>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evolve(mut self, h: CMatrix, duration: f64) -> Self {
        self.steps.push(Step::Evolve { h, duration });
        self
    }

    pub fn apply(mut self, u: CMatrix) -> Self {
        self.steps.push(Step::Unitary(u));
        self
    }

    pub fn dim(&self) -> Option<usize> {
        self.steps.first().map(|s| match s {
            Step::Evolve { h, .. } => h.nrows(),
            Step::Unitary(u) => u.nrows(),
        })
    }

    /// The full propagator of the sequence.
    pub fn unitary(&self) -> Result<CMatrix> {
        let n = self
            .dim()
            .ok_or_else(|| Error::config("pulses", "empty pulse sequence"))?;
        let mut total = CMatrix::identity(n, n);
        for s in &self.steps {
            let u = match s {
                Step::Evolve { h, duration } => evolution_operator(h, *duration)?,
                Step::Unitary(u) => u.clone(),
            };
            if u.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: u.nrows(),
                });
            }
            total = u * total;
        }
        let defect = unitarity_defect(&total);
        if defect > UNITARITY_TOL {
            return Err(Error::IntegratorTolerance(format!(
                "unitarity defect {defect:e}"
            )));
        }
        Ok(total)
    }
}

/// psi(T) under a constant Hamiltonian.
pub fn propagate(h: &CMatrix, psi0: &CVector, t: f64) -> Result<CVector> {
    if psi0.len() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: psi0.len(),
        });
    }
    let psi = evolution_operator(h, t)? * psi0;
    check_norm(psi0, &psi)?;
    Ok(psi)
}

/// psi after every step of `seq`.
pub fn propagate_sequence(seq: &PulseSequence, psi0: &CVector) -> Result<CVector> {
    let mut psi = psi0.clone();
    for s in &seq.steps {
        let next = match s {
            Step::Evolve { h, duration } => evolution_operator(h, *duration)? * &psi,
            Step::Unitary(u) => u * &psi,
        };
        if next.len() != psi.len() {
            return Err(Error::DimensionMismatch {
                expected: psi.len(),
                found: next.len(),
            });
        }
        psi = next;
    }
    check_norm(psi0, &psi)?;
    Ok(psi)
}

fn check_norm(before: &CVector, after: &CVector) -> Result<()> {
    let drift = (after.norm() - before.norm()).abs();
    if !(drift <= UNITARITY_TOL) {
        return Err(Error::IntegratorTolerance(format!("norm drift {drift:e}")));
    }
    Ok(())
}

/// Error control for [`propagate_time_dependent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusOptions {
    /// Local error tolerance per unit time (max-entry norm of the step-doubling difference).
    pub tolerance: f64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for MagnusOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            initial_step: 1e-3,
            min_step: 1e-14,
        }
    }
}

fn magnus_step(h: &dyn Fn(f64) -> CMatrix, t: f64, dt: f64) -> Result<CMatrix> {
    // two-point Gauss-Legendre Magnus expansion, order 4
    let c = 3f64.sqrt() / 6.0;
    let h1 = h(t + (0.5 - c) * dt);
    let h2 = h(t + (0.5 + c) * dt);
    let avg = (&h1 + &h2) * Complex64::new(0.5, 0.0);
    let comm = &h2 * &h1 - &h1 * &h2;
    // Omega = -i dt H_eff with H_eff = avg - i (sqrt3/12) dt [H2, H1]
    let omega_h = avg - comm * (I * Complex64::new(3f64.sqrt() / 12.0 * dt, 0.0));
    evolution_operator(&omega_h, dt)
}

/// psi(T) for a time-dependent Hamiltonian with adaptive step control.
pub fn propagate_time_dependent(
    h: &dyn Fn(f64) -> CMatrix,
    psi0: &CVector,
    t_final: f64,
    opts: MagnusOptions,
) -> Result<CVector> {
    let mut t = 0.0;
    let mut dt = opts.initial_step.min(t_final).max(opts.min_step);
    let mut psi = psi0.clone();
    while t < t_final {
        dt = dt.min(t_final - t);
        let full = magnus_step(h, t, dt)? * &psi;
        let half = magnus_step(h, t, dt / 2.0)? * &psi;
        let two_half = magnus_step(h, t + dt / 2.0, dt / 2.0)? * half;
        let err = (&full - &two_half)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            / 15.0;
        // round-off sets a floor on what step doubling can resolve
        let allowed = (opts.tolerance * dt).max(1e-15);
        if err <= allowed || dt <= opts.min_step {
            if err > allowed {
                return Err(Error::IntegratorTolerance(format!(
                    "step size underflow at t = {t:e} (local error {err:e})"
                )));
            }
            psi = two_half;
            t += dt;
            let grow = if err > 0.0 {
                (allowed / err).powf(0.2).min(2.0)
            } else {
                2.0
            };
            dt *= 0.9 * grow.max(0.2);
        } else {
            dt *= (0.9 * (allowed / err).powf(0.2)).clamp(0.1, 0.9);
        }
    }
    check_norm(psi0, &psi)?;
    Ok(psi)
}

/// Propagator U(T) of a time-dependent Hamiltonian on `dim` levels.
pub fn evolution_operator_time_dependent(
    h: &dyn Fn(f64) -> CMatrix,
    dim: usize,
    t_final: f64,
    opts: MagnusOptions,
) -> Result<CMatrix> {
    let mut u = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut e = CVector::zeros(dim);
        e[col] = Complex64::new(1.0, 0.0);
        let psi = propagate_time_dependent(h, &e, t_final, opts)?;
        u.set_column(col, &psi);
    }
    Ok(u)
}

/// U(T) for a Hamiltonian periodic in `period`: one period is integrated and
/// raised to the number of whole periods, the remainder integrated directly.
pub fn periodic_evolution_operator(
    h: &dyn Fn(f64) -> CMatrix,
    dim: usize,
    period: f64,
    t_final: f64,
    opts: MagnusOptions,
) -> Result<CMatrix> {
    if !(period > 0.0) || period >= t_final {
        return evolution_operator_time_dependent(h, dim, t_final, opts);
    }
    let whole = (t_final / period).floor() as u64;
    let remainder = t_final - whole as f64 * period;
    let one = evolution_operator_time_dependent(h, dim, period, opts)?;
    let mut power = CMatrix::identity(dim, dim);
    let mut base = one;
    let mut e = whole;
    while e > 0 {
        if e & 1 == 1 {
            power = &base * &power;
        }
        base = &base * &base;
        e >>= 1;
    }
    let tail = if remainder > 0.0 {
        evolution_operator_time_dependent(h, dim, remainder, opts)?
    } else {
        CMatrix::identity(dim, dim)
    };
    let u = tail * power;
    let defect = unitarity_defect(&u);
    if defect > UNITARITY_TOL {
        return Err(Error::IntegratorTolerance(format!(
            "unitarity defect {defect:e}"
        )));
    }
    Ok(u)
}

/// Kronecker product a (x) b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    CMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}
