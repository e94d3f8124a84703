use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use rydfermi::lattice::*;

const RB: f64 = 86.909_180_5;
const CS: f64 = 132.905_451_96;
const HBAR: f64 = 1.054_571_817e-34;
const AMU: f64 = 1.660_539_066_60e-27;

fn plus_mode(lambda: f64, depth_hz: f64, mass: f64) -> WannierMode {
    let c = LatticeConfig::new(lambda, depth_hz, 0.0, mass).unwrap();
    lattice_mode(&c, Curve::Plus, c.plus_minimum_near(lambda / 4.0)).unwrap()
}

/// Normalized oscillator eigenfunction of width sigma centered at c.
fn oscillator(n: usize, sigma: f64, c: f64, z: f64) -> f64 {
    let x = (z - c) / sigma;
    let mut p0 = PI.powf(-0.25) * (-x * x / 2.0).exp();
    let mut p1 = 2f64.sqrt() * x * p0;
    if n == 0 {
        return p0 / sigma.sqrt();
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = (2.0 / kf).sqrt() * x * p1 - ((kf - 1.0) / kf).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    p1 / sigma.sqrt()
}

fn quadrature_overlap(m: usize, sa: f64, ca: f64, n: usize, sb: f64, cb: f64) -> f64 {
    let lo = ca.min(cb) - 12.0 * sa.max(sb);
    let hi = ca.max(cb) + 12.0 * sa.max(sb);
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    (0..=steps)
        .map(|i| {
            let z = lo + i as f64 * h;
            oscillator(m, sa, ca, z) * oscillator(n, sb, cb, z)
        })
        .sum::<f64>()
        * h
}

#[test]
fn reference_trap_widths() {
    for (lambda, depth, mass, sigma) in [
        (420.0, 10e6, RB, 12.5),
        (800.0, 10e6, RB, 17.0),
        (350.0, 20e6, CS, 8.7),
    ] {
        let m = plus_mode(lambda, depth, mass);
        assert!(
            (m.sigma_nm / sigma - 1.0).abs() <= 0.05,
            "{lambda} nm: {}",
            m.sigma_nm
        );
    }
}

#[test]
fn width_matches_oscillator_length() {
    let m = plus_mode(800.0, 10e6, RB);
    let expect = (HBAR / (RB * AMU * m.omega)).sqrt() * 1e9;
    assert!((m.sigma_nm / expect - 1.0).abs() < 1e-9);
    let k = 2.0 * PI / 800e-9;
    let omega = (2.0 * (2.0 * PI * 10e6) * HBAR * k * k / (RB * AMU)).sqrt();
    assert!((m.omega / omega - 1.0).abs() < 1e-6);
}

#[test]
fn degenerate_polarization_overlaps_the_lattices() {
    let c = LatticeConfig::new(800.0, 10e6, 0.0, RB).unwrap();
    let z: Vec<f64> = (0..400).map(|i| i as f64 * 2.0).collect();
    let p = spin_potentials(&c, &z).unwrap();
    assert_eq!(p.displacement_nm, 0.0);
    assert_eq!(p.v_plus, p.v_minus);
    for i in 0..z.len() {
        assert_eq!(p.v_qubit0[i], (p.v_plus[i] + 3.0 * p.v_minus[i]) / 4.0);
        assert_eq!(p.v_qubit1[i], p.v_plus[i]);
    }
    assert!(spin_potentials(&c, &[0.0, 100.0]).is_err());
    assert!(LatticeConfig::new(800.0, 10e6, FRAC_PI_2, RB).is_err());
}

#[test]
fn quarter_pi_gives_200_nm() {
    let c = LatticeConfig::new(800.0, 10e6, FRAC_PI_4, RB).unwrap();
    assert!((c.displacement_nm() - 200.0).abs() < 1e-12);
}

#[test]
fn franck_condon_exact_values() {
    let a = WannierMode::new(0.0, 2.0 * PI * 50e3, RB, 0).unwrap();
    assert!((franck_condon(&a, &a) - 1.0).abs() < 1e-12);
    let b = WannierMode {
        center_nm: 2.0 * a.sigma_nm,
        ..a
    };
    assert!((franck_condon(&a, &b) - (-1f64).exp()).abs() < 1e-9);
    for n in 1..6 {
        assert!((franck_condon(&a.excited(n), &a.excited(n)) - 1.0).abs() < 1e-12);
        assert!(franck_condon(&a, &a.excited(n)).abs() < 1e-15);
    }
}

#[test]
fn franck_condon_table_invariants() {
    let c = LatticeConfig::new(800.0, 10e6, 0.589, RB).unwrap();
    let (q0, q1) = qubit_modes(&c, Some(150.0)).unwrap();
    let table = franck_condon_table(&q0, &q1, default_intermediate(&q0, &q1), 40).unwrap();
    for f in [&table.f0, &table.f1] {
        assert!(f.iter().all(|x| x.abs() <= 1.0));
        let sum: f64 = f.iter().map(|x| x * x).sum();
        assert!(sum <= 1.0 + 1e-12 && sum > 0.999, "{sum}");
    }
    let f: f64 = table.f0.iter().zip(&table.f1).map(|(a, b)| a * b).sum();
    assert!((table.effective_f - f).abs() < 1e-15);
    // mirror-symmetric placement about the intermediate trap
    let mirror = WannierMode {
        center_nm: 2.0 * default_intermediate(&q0, &q1).center_nm - q1.center_nm,
        ..q1
    };
    let t2 = franck_condon_table(&mirror, &q1, default_intermediate(&q0, &q1), 10).unwrap();
    for n in 0..10 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((t2.f0[n] - sign * t2.f1[n]).abs() < 1e-12);
    }
}

#[test]
fn cutoff_check_flags_unconverged_tables() {
    let a = WannierMode::new(0.0, 2.0 * PI * 50e3, RB, 0).unwrap();
    let far = WannierMode {
        center_nm: 6.0 * a.sigma_nm,
        ..a
    };
    let trap = IntermediateTrap {
        center_nm: 3.0 * a.sigma_nm,
        omega: a.omega,
    };
    assert!(matches!(
        effective_franck_condon(&a, &far, trap, 2),
        Err(rydfermi::Error::CutoffTooSmall { .. })
    ));
    assert!(effective_franck_condon(&a, &far, trap, 60).is_ok());
}

fn midpoint_drive(
    omega_tr: f64,
    big_delta: f64,
    delta: f64,
    n: usize,
) -> (RamanDrive, FranckCondonTable) {
    let q0 = WannierMode::new(0.0, omega_tr, RB, 0).unwrap();
    let q1 = WannierMode {
        center_nm: 0.5 * q0.sigma_nm,
        ..q0
    };
    let trap = IntermediateTrap {
        center_nm: 0.25 * q0.sigma_nm,
        omega: omega_tr,
    };
    let table = franck_condon_table(&q0, &q1, trap, n).unwrap();
    let drive = RamanDrive {
        omega0: 5.0 * omega_tr,
        omega1: 5.0 * omega_tr,
        big_delta,
        delta,
        n_levels: n,
    };
    (drive, table)
}

#[test]
fn full_raman_dynamics_matches_the_effective_two_level_model() {
    let omega_tr = 2.0 * PI * 50e3;
    let n = 6;
    for delta_scale in [0.0, 0.4, -0.7] {
        let (mut drive, table) = midpoint_drive(omega_tr, 100.0 * omega_tr, 0.0, n);
        let probe = effective_two_level(&drive, &table, omega_tr).unwrap();
        drive.delta = delta_scale * probe.omega_eff;
        let eff = effective_two_level(&drive, &table, omega_tr).unwrap();
        let t_pi = eff.transfer_time();
        // the closed form drops the (j + 1/2) omega_tr part of each detuning, an
        // O(omega_tr / Delta) phase drift that grows past the transfer time
        for frac in [0.25, 0.5, 0.75, 1.0] {
            let t = frac * t_pi;
            let psi = raman_dynamics(&drive, &table, omega_tr, &ground_state(n), t).unwrap();
            let full = psi[1].norm_sqr();
            let reduced = eff.transfer_probability(t);
            assert!(
                (full - reduced).abs() <= 0.01 * reduced.max(0.05),
                "delta {delta_scale} t {frac}: {full} vs {reduced}"
            );
        }
        if delta_scale == 0.0 {
            let psi = raman_dynamics(&drive, &table, omega_tr, &ground_state(n), t_pi).unwrap();
            assert!(psi[1].norm_sqr() > 0.99);
        }
    }
}

#[test]
fn effective_parameters_follow_the_closed_forms() {
    let f0 = vec![0.8, 0.4, -0.2];
    let f1 = vec![0.5, -0.3, 0.1];
    let table = FranckCondonTable::from_overlaps(f0.clone(), f1.clone());
    let drive = RamanDrive {
        omega0: 3.0,
        omega1: 2.0,
        big_delta: 1e3,
        delta: 0.01,
        n_levels: 3,
    };
    let e = effective_two_level_unchecked(&drive, &table);
    let f = 0.8 * 0.5 + 0.4 * -0.3 + -0.2 * 0.1;
    assert!((e.omega_eff - 6.0 * f / 4e3).abs() < 1e-16);
    let shifts = (0.25 + 0.09 + 0.01) * 4.0 - (0.64 + 0.16 + 0.04) * 9.0;
    assert!((e.delta_eff - (0.01 - shifts / 4e3)).abs() < 1e-15);
    assert!(matches!(
        effective_two_level(&drive, &table, 100.0),
        Err(rydfermi::Error::ValidityWarning { .. })
    ));
}

#[test]
fn raman_rejects_bad_inputs() {
    let (drive, table) = midpoint_drive(1.0, 0.5, 0.0, 3);
    assert!(raman_dynamics(&drive, &table, 1.0, &ground_state(3), 1.0).is_err());
    let (drive, table) = midpoint_drive(1.0, 100.0, 0.0, 3);
    assert!(raman_dynamics(&drive, &table, 1.0, &ground_state(2), 1.0).is_err());
    let unnormalized = vec![Complex64::new(2.0, 0.0); 5];
    assert!(raman_dynamics(&drive, &table, 1.0, &unnormalized, 1.0).is_err());
}

proptest! {
    #[test]
    fn displacement_law(theta in 0.0f64..1.5, lambda in 300.0f64..1100.0) {
        let c = LatticeConfig::new(lambda, 10e6, theta, RB).unwrap();
        let plus = lattice_mode(&c, Curve::Plus, c.plus_minimum_near(lambda / 4.0)).unwrap();
        let minus = lattice_mode(&c, Curve::Minus, plus.center_nm + c.displacement_nm()).unwrap();
        let d = theta * lambda / PI;
        prop_assert!((minus.center_nm - plus.center_nm - d).abs() < 1e-3);
    }

    #[test]
    fn overlaps_match_quadrature(
        m in 0usize..5, n in 0usize..5,
        sa in 5.0f64..20.0, ratio in 0.6f64..1.6, d in -30.0f64..30.0,
    ) {
        let sb = sa * ratio;
        let t = overlap_table(0.0, sa, d, sb, m, n);
        let q = quadrature_overlap(m, sa, 0.0, n, sb, d);
        prop_assert!((t[m][n] - q).abs() < 1e-9, "{} vs {}", t[m][n], q);
    }

    #[test]
    fn overlap_symmetry_and_completeness(
        sa in 5.0f64..20.0, ratio in 0.7f64..1.4, d in -25.0f64..25.0, m in 0usize..3,
    ) {
        let sb = sa * ratio;
        let ab = overlap_table(0.0, sa, d, sb, m, 80);
        let ba = overlap_table(d, sb, 0.0, sa, 80, m);
        for n in 0..=80 {
            prop_assert!((ab[m][n] - ba[n][m]).abs() < 1e-12);
        }
        let sum: f64 = ab[m].iter().map(|x| x * x).sum();
        prop_assert!((sum - 1.0).abs() < 1e-9, "{}", sum);
    }
}
