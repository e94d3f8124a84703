use std::sync::OnceLock;

use nalgebra::Vector3;
use num_complex::Complex64;
use proptest::prelude::*;

use rydfermi::atomic::*;
use rydfermi::scattering::*;
use rydfermi::units;

fn rb46d() -> RydbergLevel {
    RydbergLevel::stretched(Species::Rb, 46, 2).unwrap()
}

fn evaluator() -> &'static RfEvaluator {
    static EVAL: OnceLock<RfEvaluator> = OnceLock::new();
    EVAL.get_or_init(|| {
        RfEvaluator::new(
            &RydbergSuperposition::single(rb46d()),
            &ScatteringModel::default_for(Species::Rb),
            &QuantumDefectTable::default(),
            None,
            &WavefunctionCache::in_memory(),
            false,
        )
        .unwrap()
    })
}

#[test]
fn momentum_at_2000_bohr() {
    let k = local_momentum(46.0, 2000.0);
    assert!((k.k - 2.297e-2).abs() < 5e-6, "{}", k.k);
    assert_eq!(k.regime, Regime::Classical);
    let outside = local_momentum(46.0, 5000.0);
    assert_eq!((outside.k, outside.regime), (K_MIN, Regime::Clamped));
}

#[test]
fn zero_model_vanishes() {
    let eval = RfEvaluator::new(
        &RydbergSuperposition::single(rb46d()),
        &ScatteringModel::zero(Species::Rb),
        &QuantumDefectTable::default(),
        None,
        &WavefunctionCache::in_memory(),
        false,
    )
    .unwrap();
    let s = eval.sample(&Vector3::new(3000.0, 200.0, -100.0)).unwrap();
    assert_eq!((s.s_term, s.p_term, s.total), (0.0, 0.0, 0.0));
}

#[test]
fn s_term_is_linear_in_the_density() {
    let defects = QuantumDefectTable::default();
    let model = ScatteringModel::default_for(Species::Rb);
    let cache = WavefunctionCache::in_memory();
    let p = Vector3::new(3500.0, 400.0, 150.0);
    let base = RfEvaluator::new(
        &RydbergSuperposition::single(rb46d()),
        &model,
        &defects,
        None,
        &cache,
        false,
    )
    .unwrap()
    .sample(&p)
    .unwrap();
    for c in [0.25, 3.0, 17.5] {
        let scaled = RydbergSuperposition {
            components: vec![(rb46d(), Complex64::new(f64::sqrt(c), 0.0))],
            polarization: None,
        };
        let s = RfEvaluator::new(&scaled, &model, &defects, None, &cache, false)
            .unwrap()
            .sample(&p)
            .unwrap();
        assert!((s.s_term - c * base.s_term).abs() <= 1e-13 * (c * base.s_term).abs());
    }
}

#[test]
fn symmetric_atoms_add_up() {
    let basis = PecBasis::new(
        vec![
            rb46d(),
            RydbergLevel::from_doubled(Species::Rb, 46, 2, 5, 3).unwrap(),
        ],
        10,
    )
    .unwrap();
    let system = PecSystem::new(
        &basis,
        &ScatteringModel::default_for(Species::Rb),
        &QuantumDefectTable::default(),
        &WavefunctionCache::in_memory(),
        false,
    )
    .unwrap();
    let a = Vector3::new(3200.0, 0.0, 0.0);
    let b = Vector3::new(-3200.0, 0.0, 0.0);
    let e0 = system.energies[0];
    let both = system.hamiltonian(&[a, b]).unwrap()[(0, 0)].re - e0;
    let one = system.hamiltonian(&[a]).unwrap()[(0, 0)].re - e0;
    let other = system.hamiltonian(&[b]).unwrap()[(0, 0)].re - e0;
    assert!(
        (both - one - other).abs() <= 1e-12 * both.abs(),
        "{both} vs {}",
        one + other
    );
}

#[test]
fn single_state_pec_is_the_first_order_shift() {
    let defects = QuantumDefectTable::default();
    let model = ScatteringModel::default_for(Species::Rb);
    let basis = PecBasis::new(vec![rb46d()], 1).unwrap();
    let separations: Vec<f64> = (0..40).map(|i| 1500.0 + 80.0 * i as f64).collect();
    let dirs = [Vector3::new(1.0, 0.0, 0.0)];
    let curves = pec(
        &basis,
        &dirs,
        &separations,
        &model,
        &defects,
        &WavefunctionCache::in_memory(),
        false,
    )
    .unwrap();
    let e0 = level_energy(&rb46d(), &defects);
    let eval = evaluator();
    // the eigenvalue carries E0, so the shift is resolved only to a few ulp of E0
    let floor = 4.0 * f64::EPSILON * e0.abs();
    for (i, r) in separations.iter().enumerate() {
        let shift = curves.sorted[i][0] - e0;
        let direct = eval.sample(&Vector3::new(*r, 0.0, 0.0)).unwrap().total;
        assert!(
            (shift - direct).abs() <= (1e-9 * direct.abs()).max(floor),
            "R={r}: {shift:e} vs {direct:e}"
        );
    }
}

#[test]
fn pec_limits() {
    let defects = QuantumDefectTable::default();
    let cache = WavefunctionCache::in_memory();
    let target = rb46d();
    let basis = PecBasis::around(
        target,
        &defects,
        units::mhz_to_hartree(80e3),
        2,
        &[5, 3],
        50,
    )
    .unwrap();
    assert!(basis.states.len() > 1);
    let dirs = [Vector3::new(1.0, 0.0, 0.0)];
    let near = [1500.0, 2500.0, 3500.0];
    let flat = pec(
        &basis,
        &dirs,
        &near,
        &ScatteringModel::zero(Species::Rb),
        &defects,
        &cache,
        false,
    )
    .unwrap();
    let mut unperturbed = flat.unperturbed.clone();
    unperturbed.sort_by(f64::total_cmp);
    for row in &flat.sorted {
        for (e, u) in row.iter().zip(&unperturbed) {
            assert!((e - u).abs() < 1e-16);
        }
    }
    let far = [3.0 * 46.0 * 46.0 * 2.0];
    let curves = pec(
        &basis,
        &dirs,
        &far,
        &ScatteringModel::default_for(Species::Rb),
        &defects,
        &cache,
        false,
    )
    .unwrap();
    for (e, u) in curves.sorted[0].iter().zip(&unperturbed) {
        assert!(units::hartree_to_mhz((e - u).abs()) < 1e-3);
    }
    assert!(matches!(
        PecBasis::around(target, &defects, units::mhz_to_hartree(80e3), 2, &[5, 3], 1),
        Err(rydfermi::Error::BasisTooLarge { .. })
    ));
}

#[test]
fn map_cells_match_direct_evaluation_and_crop() {
    let eval = evaluator();
    let extent = units::nm_to_bohr(300.0);
    let crop = units::nm_to_bohr(60.0);
    let map = interaction_map(eval, MapPlane::XY, extent, 16, crop).unwrap();
    for ib in 0..16 {
        for ia in 0..16 {
            let cell = map.cell(ia, ib);
            let (a, b) = (cell_center(ia, 16, extent), cell_center(ib, 16, extent));
            assert_eq!((cell.a, cell.b), (a, b));
            if a.hypot(b) < crop {
                assert_eq!(cell.status, CellStatus::Cropped);
            } else {
                let direct = eval.sample(&Vector3::new(a, b, 0.0)).unwrap();
                assert_eq!(
                    cell.sample.as_ref().unwrap().total.to_bits(),
                    direct.total.to_bits()
                );
            }
        }
    }
    assert!(interaction_map(eval, MapPlane::XY, extent, 8, 0.0).is_err());
}

#[test]
fn delta_width_site_equals_point_value() {
    let eval = evaluator();
    let r_nm = units::bohr_to_nm(eval.state.outermost_antinode());
    let center = Vector3::new(r_nm, 0.0, 0.0);
    let site = SiteDensity::from_nm(center, Vector3::repeat(1e-3));
    let avg = site_averaged_interaction(eval, &site).unwrap();
    let point = eval.sample(&center.map(units::nm_to_bohr)).unwrap().total;
    assert!(
        (avg - point).abs() <= 1e-3 * point.abs(),
        "{avg:e} vs {point:e}"
    );
}

#[test]
fn gauss_hermite_integrates_moments() {
    let (t, w) = gauss_hermite(12);
    let m0: f64 = w.iter().sum();
    let m2: f64 = t.iter().zip(&w).map(|(x, w)| w * x * x).sum();
    let m4: f64 = t.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
    let sp = std::f64::consts::PI.sqrt();
    assert!((m0 - sp).abs() < 1e-13);
    assert!((m2 - sp / 2.0).abs() < 1e-13);
    assert!((m4 - 0.75 * sp).abs() < 1e-12);
}

#[test]
fn strict_mode_rejects_the_resonance() {
    let model = ScatteringModel::default_for(Species::Cs);
    let k = ElectronMomentum {
        k: model.p_res_k,
        regime: Regime::Classical,
    };
    assert!(matches!(
        phase_shifts(&model, k, true),
        Err(rydfermi::Error::ResonanceSingularity { .. })
    ));
    let relaxed = phase_shifts(&model, k, false).unwrap();
    assert!(relaxed.near_resonance && relaxed.tan_p.is_finite());
}

proptest! {
    #[test]
    fn momentum_decreases_outward(n in 30.0f64..70.0, a in 0.05f64..0.95, b in 0.05f64..0.95) {
        let turning = 2.0 * n * n;
        let (r1, r2) = (a.min(b) * turning, a.max(b) * turning);
        prop_assume!(r2 - r1 > 1e-6 * turning);
        prop_assert!(local_momentum(n, r1).k > local_momentum(n, r2).k);
    }

    #[test]
    fn low_k_scattering_length(k in 1e-6f64..1e-3) {
        for species in [Species::Rb, Species::Cs] {
            let m = ScatteringModel::default_for(species);
            prop_assert!((m.tan_delta_s(k) / k + m.a_s).abs() <= 0.01 * m.a_s.abs());
        }
    }

    #[test]
    fn attraction_where_s_dominates(x in 2500.0f64..4000.0, y in -500.0f64..500.0) {
        let model = ScatteringModel { a_s: 16.1, ..ScatteringModel::zero(Species::Rb) };
        let eval = RfEvaluator::new(
            &RydbergSuperposition::single(rb46d()),
            &model,
            &QuantumDefectTable::default(),
            None,
            &WavefunctionCache::in_memory(),
            false,
        ).unwrap();
        let s = eval.sample(&Vector3::new(x, y, 0.0)).unwrap();
        prop_assert!(model.tan_delta_s(s.k) < 0.0);
        prop_assert!(s.total <= 0.0);
    }
}
