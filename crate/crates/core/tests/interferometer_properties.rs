use proptest::prelude::*;

use uurlab_core::interferometer::*;
use uurlab_core::qlinalg::random::{haar_unitary, random_pure_state};
use uurlab_core::qlinalg::{rotation_unitary, seeded_rng};
use uurlab_core::uur::{principal_arg, uur_bargmann_pair};
use uurlab_core::{Complex64, DensityMatrix, PureState, UnitaryOp};

fn h() -> DensityMatrix {
    PureState::basis(2, 0).unwrap().density()
}

fn wrapped(x: f64) -> f64 {
    principal_arg(Complex64::from_polar(1.0, x))
}

fn overlap(rho: &DensityMatrix, u: &UnitaryOp, v: &UnitaryOp) -> Complex64 {
    rho.expectation(&(u.matrix().adjoint() * v.matrix()))
        .unwrap()
}

#[test]
fn noiseless_visibility_and_phase_identities() {
    let cfg = InterferometerConfig::noiseless();
    let mut rng = seeded_rng(30);
    for k in 0..50 {
        let rho = random_pure_state(2, &mut rng).density();
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let uv = simulate_scan(
            &cfg,
            &rho,
            &ArmSetting::fixed("U", u.clone()),
            &ArmSetting::fixed("V", v.clone()),
            k,
        )
        .unwrap();
        let ii = simulate_scan(
            &cfg,
            &rho,
            &ArmSetting::identity(),
            &ArmSetting::identity(),
            k,
        )
        .unwrap();
        let (f_uv, f_ii) = (fit_fringe(&uv).unwrap(), fit_fringe(&ii).unwrap());
        let o = overlap(&rho, &u, &v);
        assert!((f_uv.visibility - o.norm()).abs() < 1e-9);
        if f_uv.theta0_constrained {
            let phase = phase_difference(&f_uv, &f_ii).unwrap();
            assert!(
                wrapped(phase - o.arg()).abs() < 1e-9,
                "phase {phase} vs {}",
                o.arg()
            );
        }
    }
}

#[test]
fn rotation_phase_against_reference() {
    let cfg = InterferometerConfig::noiseless();
    let u = rotation_unitary([0.0, 1.0, 0.0], std::f64::consts::PI / 4.0).unwrap();
    let scan = simulate_scan(
        &cfg,
        &h(),
        &ArmSetting::fixed("U", u.clone()),
        &ArmSetting::identity(),
        0,
    )
    .unwrap();
    let reference = simulate_scan(
        &cfg,
        &h(),
        &ArmSetting::identity(),
        &ArmSetting::identity(),
        1,
    )
    .unwrap();
    let phase = phase_difference(
        &fit_fringe(&scan).unwrap(),
        &fit_fringe(&reference).unwrap(),
    )
    .unwrap();
    let want = h().expectation(&u.matrix().adjoint()).unwrap().arg();
    assert!(wrapped(phase - want).abs() < 1e-9);
}

#[test]
fn end_to_end_matches_algebra() {
    let mut rng = seeded_rng(31);
    let cfg = InterferometerConfig {
        phase_offset: 0.9,
        ..InterferometerConfig::noiseless()
    };
    let mut compared = 0;
    for k in 0..20 {
        let rho = random_pure_state(2, &mut rng).density();
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let set = simulate_scan_set(
            &cfg,
            &rho,
            &ArmSetting::fixed("U", u.clone()),
            &ArmSetting::fixed("V", v.clone()),
            4 * k,
        )
        .unwrap();
        let measured = relation_from_scans(RelationKind::UurBargmann, &set, false).unwrap();
        let algebra = uur_bargmann_pair(&rho, &u, &v).unwrap();
        assert!((measured.lhs - algebra.lhs).abs() < 1e-9);
        assert!((measured.rhs - algebra.rhs).abs() < 1e-9);
        assert_eq!(measured.saturated, algebra.saturated);
        compared += 1;
    }
    assert_eq!(compared, 20);
}

#[test]
fn bargmann_phase_is_offset_invariant() {
    let u = rotation_unitary([1.0, 0.0, 0.0], 1.0).unwrap();
    let v = rotation_unitary([0.0, 1.0, 0.0], 1.3).unwrap();
    let (us, vs) = (ArmSetting::fixed("U", u), ArmSetting::fixed("V", v));
    let phase = |offset: f64| {
        let cfg = InterferometerConfig {
            phase_offset: offset,
            ..InterferometerConfig::noiseless()
        };
        let set = simulate_scan_set(&cfg, &h(), &us, &vs, 0).unwrap();
        let fits: Vec<_> = set.scans().map(|s| fit_fringe(s).unwrap()).collect();
        bargmann_phase_from_fits(&fits[0], &fits[1], &fits[2], &fits[3])
            .unwrap()
            .0
    };
    let base = phase(0.0);
    for offset in [0.4, -1.7, 2.9] {
        assert!(wrapped(phase(offset) - base).abs() < 1e-9);
    }
}

#[test]
fn noisy_visibility_within_two_percent() {
    let u = rotation_unitary([1.0, 0.0, 0.0], 1.2).unwrap();
    let truth = overlap(&h(), &UnitaryOp::identity(2), &u).norm();
    let mut good = 0;
    for seed in 0..500 {
        let cfg = InterferometerConfig {
            counts_scale: 1e4,
            seed,
            ..Default::default()
        };
        let s = simulate_scan(
            &cfg,
            &h(),
            &ArmSetting::identity(),
            &ArmSetting::fixed("U", u.clone()),
            0,
        )
        .unwrap();
        if (fit_fringe(&s).unwrap().visibility - truth).abs() <= 0.02 {
            good += 1;
        }
    }
    assert!(good >= 475, "{good}/500");
}

#[test]
fn pulls_have_unit_variance() {
    let u = rotation_unitary([1.0, 0.0, 0.0], 1.6).unwrap();
    let o = overlap(&h(), &UnitaryOp::identity(2), &u);
    let scale = 4000.0;
    let (a1, a2, theta0) = (scale * (1.0 - o.norm()) / 2.0, scale * o.norm(), o.arg());
    let mut pulls = [Vec::new(), Vec::new(), Vec::new()];
    for seed in 0..500 {
        let cfg = InterferometerConfig {
            counts_scale: scale,
            seed,
            ..Default::default()
        };
        let s = simulate_scan(
            &cfg,
            &h(),
            &ArmSetting::identity(),
            &ArmSetting::fixed("U", u.clone()),
            0,
        )
        .unwrap();
        let f = fit_fringe(&s).unwrap();
        pulls[0].push((f.a1 - a1) / f.se_a1);
        pulls[1].push((f.a2 - a2) / f.se_a2);
        pulls[2].push(wrapped(f.theta0 - theta0) / f.se_theta0);
    }
    for p in &pulls {
        let n = p.len() as f64;
        let mean = p.iter().sum::<f64>() / n;
        let var = p.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((0.8..=1.2).contains(&var), "pull variance {var}");
        assert!(mean.abs() < 0.2, "pull mean {mean}");
    }
}

#[test]
fn csv_round_trip_preserves_fit() {
    let cfg = InterferometerConfig {
        seed: 4,
        ..Default::default()
    };
    let u = rotation_unitary([0.0, 0.0, 1.0], 0.8).unwrap();
    let s = simulate_scan(
        &cfg,
        &random_pure_state(2, &mut seeded_rng(5)).density(),
        &ArmSetting::fixed("U", u),
        &ArmSetting::identity(),
        2,
    )
    .unwrap();
    let dir = std::env::temp_dir().join(format!("uurlab-core-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = s.save(&dir).unwrap();
    assert_eq!(path.file_name().unwrap(), "scan_U_I.csv");
    let back = FringeScan::load(&path).unwrap();
    assert_eq!(back.points(), s.points());
    assert_eq!((back.left.as_str(), back.right.as_str()), ("U", "I"));
    let (a, b) = (fit_fringe(&s).unwrap(), fit_fringe(&back).unwrap());
    assert!((a.visibility - b.visibility).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn stream_order_does_not_matter() {
    let cfg = InterferometerConfig {
        seed: 77,
        waveplate_error_deg: 0.5,
        ..Default::default()
    };
    let u = ArmSetting::stack("U", WaveplateStack::new(36.0, 0.0).unwrap());
    let v = ArmSetting::stack("V", WaveplateStack::new(0.0, 36.0).unwrap());
    let set = simulate_scan_set(&cfg, &h(), &u, &v, 8).unwrap();
    let lone = simulate_scan(&cfg, &h(), &ArmSetting::identity(), &v, 10).unwrap();
    assert_eq!(set.iv.as_ref().unwrap(), &lone);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parameterisations_give_same_visibility(seed in any::<u64>(), angle in 0.2f64..2.8) {
        let u = rotation_unitary([0.6, 0.0, 0.8], angle).unwrap();
        let cfg = InterferometerConfig { seed, ..Default::default() };
        let s = simulate_scan(&cfg, &h(), &ArmSetting::fixed("U", u), &ArmSetting::identity(), 0).unwrap();
        let a = fit_fringe(&s).unwrap();
        let b = fit_fringe_with(&s, &FitOptions { parameterisation: Parameterisation::Harmonic, ..Default::default() }).unwrap();
        prop_assume!(a.a1 > 0.0 && b.a1 > 0.0);
        prop_assert!((a.visibility - b.visibility).abs() < 1e-12);
    }

    #[test]
    fn visibility_matches_own_fields(seed in any::<u64>(), angle in 0.0f64..3.1) {
        let u = rotation_unitary([0.0, 1.0, 0.0], angle).unwrap();
        let cfg = InterferometerConfig { seed, ..Default::default() };
        let s = simulate_scan(&cfg, &h(), &ArmSetting::fixed("U", u), &ArmSetting::identity(), 0).unwrap();
        let f = fit_fringe(&s).unwrap();
        prop_assert!((f.visibility - f.a2 / (2.0 * f.a1 + f.a2)).abs() < 1e-12);
        prop_assert!(f.a1 >= 0.0 && f.a2 >= 0.0);
        prop_assert!(f.iterations < 50, "{} iterations", f.iterations);
        prop_assert!(f.theta0 > -std::f64::consts::PI && f.theta0 <= std::f64::consts::PI);
    }

    #[test]
    fn stacks_are_unitary(alpha in 0.0f64..180.0, beta in 0.0f64..180.0) {
        let u = waveplate_stack_unitary(&WaveplateStack::new(alpha, beta).unwrap());
        prop_assert!(UnitaryOp::new(u.matrix().clone()).is_ok());
    }

    #[test]
    fn mean_output_in_unit_interval(seed in any::<u64>(), chi in -7.0f64..7.0) {
        let mut rng = seeded_rng(seed);
        let rho = random_pure_state(2, &mut rng).density();
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let m = mean_output(&rho, &u, &v, chi).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&m));
        let peak = mean_output(&rho, &u, &v, overlap(&rho, &u, &v).arg()).unwrap();
        prop_assert!(peak >= m - 1e-12);
    }
}
