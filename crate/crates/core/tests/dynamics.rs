mod common;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

use rydfermi::dynamics::*;
use rydfermi::gates::{detuned_rotation_amplitude, excitation_phase, two_pi_duration};

use common::{expm_hermitian, expm_taylor};

fn hermitian(entries: &[f64], n: usize) -> CMatrix {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let mut it = entries.iter();
    for r in 0..n {
        h[(r, r)] = Complex64::new(*it.next().unwrap(), 0.0);
        for c in r + 1..n {
            let z = Complex64::new(*it.next().unwrap(), *it.next().unwrap());
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    h
}

fn wrap(phase: f64) -> f64 {
    (phase + PI).rem_euclid(2.0 * PI) - PI
}

proptest! {
    #[test]
    fn propagator_matches_eigen_exponential(
        entries in prop::collection::vec(-5.0f64..5.0, 64),
        t in 0.0f64..4.0,
    ) {
        let h = hermitian(&entries, 8);
        let u = evolution_operator(&h, t).unwrap();
        let oracle = expm_hermitian(&h, t);
        let err = (&u - &oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-8, "{err:e}");
        prop_assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn propagate_matches_taylor_oracle(
        entries in prop::collection::vec(-3.0f64..3.0, 64),
        amps in prop::collection::vec(-1.0f64..1.0, 16),
        t in 0.0f64..2.0,
    ) {
        let h = hermitian(&entries, 8);
        let mut psi0 = DVector::from_iterator(8, (0..8).map(|i| Complex64::new(amps[2 * i], amps[2 * i + 1])));
        let norm = psi0.norm();
        prop_assume!(norm > 1e-3);
        psi0 /= Complex64::new(norm, 0.0);
        let psi = propagate(&h, &psi0, t).unwrap();
        let oracle = expm_taylor(&(h * Complex64::new(0.0, -t))) * &psi0;
        prop_assert!((&psi - oracle).norm() < 1e-8);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detuned_two_pi_phase(x in -3.0f64..3.0, omega in 0.1f64..50.0) {
        let amp = detuned_rotation_amplitude(omega, x * omega).unwrap();
        prop_assert!((amp.norm() - 1.0).abs() < 1e-9);
        // closed form: pi - pi x / sqrt(1 + x^2)
        let closed = PI - PI * x / (1.0 + x * x).sqrt();
        prop_assert!(wrap(amp.arg() - closed).abs() < 1e-6);
        prop_assert!(wrap(excitation_phase(x) - closed).abs() < 1e-12);
    }

    #[test]
    fn magnus_matches_constant_hamiltonian(
        entries in prop::collection::vec(-2.0f64..2.0, 16),
        t in 0.1f64..3.0,
    ) {
        let h = hermitian(&entries, 4);
        let hc = h.clone();
        let u = evolution_operator_time_dependent(&move |_| hc.clone(), 4, t, MagnusOptions::default()).unwrap();
        let oracle = expm_hermitian(&h, t);
        prop_assert!((&u - oracle).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-8);
    }
}

#[test]
fn two_pi_duration_closed_form() {
    assert!((two_pi_duration(3.0, 4.0) - 2.0 * PI / 5.0).abs() < 1e-15);
    assert!((two_pi_duration(2.0, 0.0) - PI).abs() < 1e-15);
}

#[test]
fn rabi_oscillation_in_time_dependent_frame() {
    // resonant lab-frame drive on {|g>, |e>} split by w: static in the
    // rotating frame, so P_e = sin^2(Omega t / 2)
    let (omega, w) = (1.3, 5.0);
    let h = move |t: f64| {
        let c = Complex64::from_polar(omega / 2.0, w * t);
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(-w / 2.0, 0.0),
                c,
                c.conj(),
                Complex64::new(w / 2.0, 0.0),
            ],
        )
    };
    let psi0 = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    for t in [0.3, 1.0, PI / omega, 4.0] {
        let psi = propagate_time_dependent(&h, &psi0, t, MagnusOptions::default()).unwrap();
        assert!((psi[1].norm_sqr() - (omega * t / 2.0).sin().powi(2)).abs() < 1e-9);
    }
}

#[test]
fn chirped_drive_against_fine_steps() {
    let h = |t: f64| {
        let d = 0.8 * (t - 1.5);
        DMatrix::from_row_slice(
            3,
            3,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.6, 0.0),
                Complex64::new(d, 0.0),
                Complex64::new(0.0, 0.4 * t.sin()),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -0.4 * t.sin()),
                Complex64::new(-d, 0.0),
            ],
        )
    };
    let t_final = 3.0;
    let u = evolution_operator_time_dependent(&h, 3, t_final, MagnusOptions::default()).unwrap();
    // midpoint product of 20000 short exponentials
    let steps = 20_000;
    let dt = t_final / steps as f64;
    let mut v = DMatrix::<Complex64>::identity(3, 3);
    for i in 0..steps {
        v = expm_hermitian(&h((i as f64 + 0.5) * dt), dt) * v;
    }
    assert!((&u - &v).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-6);
    assert!(unitarity_defect(&u) < 1e-9);
    let hp = |t: f64| h(1.5 + 0.5 * (2.0 * PI * t).sin());
    let periodic = periodic_evolution_operator(&hp, 3, 1.0, 3.5, MagnusOptions::default()).unwrap();
    let direct = evolution_operator_time_dependent(&hp, 3, 3.5, MagnusOptions::default()).unwrap();
    assert!(
        (&periodic - &direct)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            < 1e-7
    );
}

#[test]
fn pulse_sequences_compose() {
    let x = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let seq = PulseSequence::new()
        .evolve(x.clone() * Complex64::new(0.5, 0.0), PI)
        .apply(x.clone());
    let u = seq.unitary().unwrap();
    // exp(-i pi X / 2) = -i X, then X: -i I
    assert!((u - DMatrix::identity(2, 2) * Complex64::new(0.0, -1.0)).norm() < 1e-12);
    let psi0 = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let psi = propagate_sequence(&seq, &psi0).unwrap();
    assert!((psi[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    assert!(PulseSequence::new().unitary().is_err());
    assert!(PulseSequence::new()
        .evolve(x, 1.0)
        .apply(DMatrix::identity(3, 3))
        .unitary()
        .is_err());
}

#[test]
fn kron_dimensions_and_entries() {
    let a = DMatrix::from_fn(2, 2, |r, c| Complex64::new((r * 2 + c) as f64, 0.0));
    let b = DMatrix::from_fn(3, 3, |r, c| Complex64::new(0.0, (r + c) as f64));
    let k = kron(&a, &b);
    assert_eq!(k.shape(), (6, 6));
    for r in 0..6 {
        for c in 0..6 {
            assert_eq!(k[(r, c)], a[(r / 3, c / 3)] * b[(r % 3, c % 3)]);
        }
    }
}
