//! Spherical harmonics, spin-orbit spinor angular functions and gradients of
//! f(r) Y_lm products.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::Result;

use super::level::validate_l_j_mj;

/// All Y_lm (Condon-Shortley phase, orthonormal on the sphere) for l <= l_max
/// at one direction.
#[derive(Debug, Clone)]
pub struct SphericalHarmonics {
    l_max: usize,
    // normalized associated Legendre values, index l*(l+1)/2 + m for m >= 0
    legendre: Vec<f64>,
    // e^{i m phi} for m = 0..=l_max
    phases: Vec<Complex64>,
}

impl SphericalHarmonics {
    /// Evaluate at the direction of `v`; the zero vector is treated as +z.
    pub fn new(l_max: usize, v: &Vector3<f64>) -> Self {
        let r = v.norm();
        let (cos_t, sin_t, phi) = if r > 0.0 {
            let rho = v.x.hypot(v.y);
            (v.z / r, rho / r, v.y.atan2(v.x))
        } else {
            (1.0, 0.0, 0.0)
        };
        Self::from_angles(l_max, cos_t, sin_t, phi)
    }

    pub fn from_angles(l_max: usize, cos_t: f64, sin_t: f64, phi: f64) -> Self {
        let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
        let mut p = vec![0.0; idx(l_max, l_max) + 1];
        p[0] = 0.5 / PI.sqrt();
        for m in 1..=l_max {
            let mf = m as f64;
            p[idx(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t * p[idx(m - 1, m - 1)];
        }
        for m in 0..l_max {
            p[idx(m + 1, m)] = cos_t * (2.0 * m as f64 + 3.0).sqrt() * p[idx(m, m)];
        }
        for m in 0..=l_max {
            let mf = m as f64;
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lp = lf - 1.0;
                let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
                p[idx(l, m)] = a * (cos_t * p[idx(l - 1, m)] - p[idx(l - 2, m)] / a_prev);
            }
        }
        let phases = (0..=l_max)
            .map(|m| Complex64::from_polar(1.0, m as f64 * phi))
            .collect();
        Self {
            l_max,
            legendre: p,
            phases,
        }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Y_lm; zero when |m| > l or l < 0 or l beyond the table.
    pub fn get(&self, l: i64, m: i64) -> Complex64 {
        if l < 0 || m.abs() > l || l as usize > self.l_max {
            return Complex64::new(0.0, 0.0);
        }
        let (l, ma) = (l as usize, m.unsigned_abs() as usize);
        let y = self.phases[ma] * self.legendre[l * (l + 1) / 2 + ma];
        if m >= 0 {
            y
        } else if ma % 2 == 0 {
            y.conj()
        } else {
            -y.conj()
        }
    }
}

/// Spherical-basis gradient components (d/dx + i d/dy, d/dx - i d/dy, d/dz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalGradient {
    pub plus: Complex64,
    pub minus: Complex64,
    pub z: Complex64,
}

impl SphericalGradient {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            plus: z,
            minus: z,
            z,
        }
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self {
            plus: self.plus * c,
            minus: self.minus * c,
            z: self.z * c,
        }
    }

    pub fn add(self, o: Self) -> Self {
        Self {
            plus: self.plus + o.plus,
            minus: self.minus + o.minus,
            z: self.z + o.z,
        }
    }

    /// Cartesian components (d/dx, d/dy, d/dz).
    pub fn cartesian(&self) -> Vector3<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        Vector3::new(
            (self.plus + self.minus) * 0.5,
            (self.plus - self.minus) / (2.0 * i),
            self.z,
        )
    }

    /// sum over axes of conj(a_k) b_k.
    pub fn dot(a: &Self, b: &Self) -> Complex64 {
        (a.plus.conj() * b.plus + a.minus.conj() * b.minus) * 0.5 + a.z.conj() * b.z
    }

    pub fn norm_sqr(&self) -> f64 {
        0.5 * (self.plus.norm_sqr() + self.minus.norm_sqr()) + self.z.norm_sqr()
    }
}

/// Value and gradient of f(r) Y_lm(r_hat) given f and df/dr at the point.
///
/// Uses the gradient formula that expresses the result through Y_{l+1} and
/// Y_{l-1}; `ylm` must be tabulated to at least l + 1.
pub fn radial_times_ylm(
    ylm: &SphericalHarmonics,
    l: u32,
    m: i64,
    f: f64,
    df: f64,
    r: f64,
) -> (Complex64, SphericalGradient) {
    let l = i64::from(l);
    let lf = l as f64;
    let mf = m as f64;
    let value = ylm.get(l, m) * f;
    if r <= 0.0 {
        return (value, SphericalGradient::zero());
    }
    let up = df - lf * f / r;
    let down = df + (lf + 1.0) * f / r;
    let c_up = (2.0 * lf + 1.0) * (2.0 * lf + 3.0);
    let c_down = (2.0 * lf - 1.0) * (2.0 * lf + 1.0);
    let safe_sqrt = |num: f64, den: f64| {
        if num > 0.0 && den > 0.0 {
            (num / den).sqrt()
        } else {
            0.0
        }
    };

    let z = ylm.get(l + 1, m) * (safe_sqrt((lf + 1.0).powi(2) - mf * mf, c_up) * up)
        + ylm.get(l - 1, m) * (safe_sqrt(lf * lf - mf * mf, c_down) * down);
    let plus = ylm.get(l + 1, m + 1) * (-safe_sqrt((lf + mf + 1.0) * (lf + mf + 2.0), c_up) * up)
        + ylm.get(l - 1, m + 1) * (safe_sqrt((lf - mf - 1.0) * (lf - mf), c_down) * down);
    let minus = ylm.get(l + 1, m - 1) * (safe_sqrt((lf - mf + 1.0) * (lf - mf + 2.0), c_up) * up)
        - ylm.get(l - 1, m - 1) * (safe_sqrt((lf + mf - 1.0) * (lf + mf), c_down) * down);
    (value, SphericalGradient { plus, minus, z })
}

/// Angular part of a fine-structure state |l j m_j>:
/// up_coefficient Y_{l, m_j-1/2} chi_up + down_coefficient Y_{l, m_j+1/2} chi_down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorAngularFunction {
    pub l: u32,
    pub two_j: u32,
    pub two_mj: i32,
    pub up_coefficient: f64,
    pub down_coefficient: f64,
    /// (l, m) of the spin-up harmonic.
    pub up_harmonic: (u32, i64),
    /// (l, m) of the spin-down harmonic.
    pub down_harmonic: (u32, i64),
}

/// Coefficients for j = l +- 1/2:
/// [sqrt(l +- m_j + 1/2) Y_{l,m_j-1/2} chi_up -+ sqrt(l -+ m_j + 1/2) Y_{l,m_j+1/2} chi_down] / sqrt(2l+1).
pub fn angular_spinor(l: u32, two_j: u32, two_mj: i32) -> Result<SpinorAngularFunction> {
    validate_l_j_mj(l, two_j, two_mj)?;
    let lf = f64::from(l);
    let mj = f64::from(two_mj) / 2.0;
    let norm = (2.0 * lf + 1.0).sqrt();
    let (up, down) = if two_j == 2 * l + 1 {
        (
            (lf + mj + 0.5).sqrt() / norm,
            -(lf - mj + 0.5).sqrt() / norm,
        )
    } else {
        ((lf - mj + 0.5).sqrt() / norm, (lf + mj + 0.5).sqrt() / norm)
    };
    let m_up = i64::from((two_mj - 1) / 2);
    let m_down = m_up + 1;
    // a harmonic with |m| > l carries zero weight; its coefficient is zero too
    let up = if m_up.unsigned_abs() > u64::from(l) {
        0.0
    } else {
        up
    };
    let down = if m_down.unsigned_abs() > u64::from(l) {
        0.0
    } else {
        down
    };
    Ok(SpinorAngularFunction {
        l,
        two_j,
        two_mj,
        up_coefficient: up,
        down_coefficient: down,
        up_harmonic: (l, m_up),
        down_harmonic: (l, m_down),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn low_order_harmonics_match_closed_forms() {
        let (t, p) = (0.7_f64, 1.3_f64);
        let y = SphericalHarmonics::from_angles(3, t.cos(), t.sin(), p);
        let e = |m: f64| Complex64::from_polar(1.0, m * p);
        let pi = PI;
        assert!(close(
            y.get(0, 0),
            Complex64::new(0.5 / pi.sqrt(), 0.0),
            1e-15
        ));
        assert!(close(
            y.get(1, 0),
            Complex64::new((3.0 / (4.0 * pi)).sqrt() * t.cos(), 0.0),
            1e-15
        ));
        assert!(close(
            y.get(1, 1),
            e(1.0) * (-(3.0 / (8.0 * pi)).sqrt() * t.sin()),
            1e-15
        ));
        assert!(close(
            y.get(1, -1),
            e(-1.0) * ((3.0 / (8.0 * pi)).sqrt() * t.sin()),
            1e-15
        ));
        assert!(close(
            y.get(2, 2),
            e(2.0) * (0.25 * (15.0 / (2.0 * pi)).sqrt() * t.sin().powi(2)),
            1e-15
        ));
        assert!(close(
            y.get(2, -1),
            e(-1.0) * (0.5 * (15.0 / (2.0 * pi)).sqrt() * t.sin() * t.cos()),
            1e-15
        ));
        assert!(close(
            y.get(3, 0),
            Complex64::new(
                0.25 * (7.0 / pi).sqrt() * (5.0 * t.cos().powi(3) - 3.0 * t.cos()),
                0.0
            ),
            1e-14
        ));
        assert_eq!(y.get(2, 3), Complex64::new(0.0, 0.0));
        assert_eq!(y.get(-1, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn addition_theorem_holds_at_high_l() {
        let y = SphericalHarmonics::from_angles(48, 0.3_f64.cos(), 0.3_f64.sin(), 2.0);
        for l in [5i64, 20, 47] {
            let s: f64 = (-l..=l).map(|m| y.get(l, m).norm_sqr()).sum();
            let expect = (2.0 * l as f64 + 1.0) / (4.0 * PI);
            assert!(
                (s - expect).abs() < 1e-12 * expect,
                "l = {l}: {s} vs {expect}"
            );
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // f(r) = r^2 e^{-r/3}
        let f = |r: f64| r * r * (-r / 3.0).exp();
        let df = |r: f64| (2.0 * r - r * r / 3.0) * (-r / 3.0).exp();
        let value_at = |v: &Vector3<f64>, l: u32, m: i64| {
            let y = SphericalHarmonics::new(l as usize + 1, v);
            radial_times_ylm(&y, l, m, f(v.norm()), df(v.norm()), v.norm()).0
        };
        let p = Vector3::new(0.9, -1.4, 0.6);
        let h = 1e-5;
        for l in 0..5u32 {
            for m in -(l as i64)..=(l as i64) {
                let y = SphericalHarmonics::new(l as usize + 1, &p);
                let (_, g) = radial_times_ylm(&y, l, m, f(p.norm()), df(p.norm()), p.norm());
                let g = g.cartesian();
                for axis in 0..3 {
                    let mut a = p;
                    let mut b = p;
                    a[axis] += h;
                    b[axis] -= h;
                    let fd = (value_at(&a, l, m) - value_at(&b, l, m)) / (2.0 * h);
                    assert!(
                        close(g[axis], fd, 1e-8),
                        "l={l} m={m} axis={axis}: {} vs {fd}",
                        g[axis]
                    );
                }
            }
        }
    }

    #[test]
    fn spinor_edges() {
        let s = angular_spinor(0, 1, 1).unwrap();
        assert_eq!((s.up_coefficient, s.down_coefficient), (1.0, 0.0));
        let d = angular_spinor(2, 5, 5).unwrap();
        assert_eq!(d.up_harmonic, (2, 2));
        assert!((d.up_coefficient - 1.0).abs() < 1e-15 && d.down_coefficient == 0.0);
        assert!(angular_spinor(2, 7, 1).is_err());
        assert!(angular_spinor(1, 3, 5).is_err());
    }

    #[test]
    fn spinor_closed_form_and_normalization() {
        for l in 0..6u32 {
            for two_j in [2 * l + 1, (2 * l).saturating_sub(1)] {
                if two_j == 0 || (l == 0 && two_j != 1) {
                    continue;
                }
                for two_mj in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let s = angular_spinor(l, two_j, two_mj).unwrap();
                    let n = s.up_coefficient.powi(2) + s.down_coefficient.powi(2);
                    assert!((n - 1.0).abs() < 1e-12, "l={l} 2j={two_j} 2mj={two_mj}");
                    let (lf, mj) = (f64::from(l), f64::from(two_mj) / 2.0);
                    let sign = if two_j == 2 * l + 1 { 1.0 } else { -1.0 };
                    let up = (lf + sign * mj + 0.5).sqrt() / (2.0 * lf + 1.0).sqrt();
                    let down = -sign * (lf - sign * mj + 0.5).sqrt() / (2.0 * lf + 1.0).sqrt();
                    assert!((s.up_coefficient - up).abs() < 1e-15);
                    assert!((s.down_coefficient - down).abs() < 1e-15);
                }
            }
        }
    }
}
