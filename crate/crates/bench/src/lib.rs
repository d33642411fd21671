//! Fixed inputs shared by the benchmarks.

use uurlab_core::interferometer::{simulate_scan, ArmSetting, FringeScan, InterferometerConfig};
use uurlab_core::qlinalg::random::{haar_unitary, random_density_matrix};
use uurlab_core::qlinalg::{rotation_unitary, seeded_rng};
use uurlab_core::{DensityMatrix, PureState, UnitaryOp};

/// A mixed state in dimension `d` with `n` Haar unitaries.
pub fn gram_fixture(d: usize, n: usize, seed: u64) -> (DensityMatrix, Vec<UnitaryOp>) {
    let mut rng = seeded_rng(seed);
    let rho = random_density_matrix(d, &mut rng);
    let us = (0..n).map(|_| haar_unitary(d, &mut rng)).collect();
    (rho, us)
}

/// One noisy 24-point scan of `|H>` through an x rotation.
pub fn scan_fixture(seed: u64) -> FringeScan {
    let h = PureState::basis(2, 0).expect("basis state").density();
    let u = rotation_unitary([1.0, 0.0, 0.0], 1.2).expect("unit axis");
    let cfg = InterferometerConfig {
        seed,
        ..InterferometerConfig::default()
    };
    simulate_scan(
        &cfg,
        &h,
        &ArmSetting::identity(),
        &ArmSetting::fixed("U", u),
        0,
    )
    .expect("valid scan")
}

/// The eighth-turn y and z rotations.
pub fn mus_fixture() -> (UnitaryOp, UnitaryOp) {
    let q = std::f64::consts::FRAC_PI_4;
    (
        rotation_unitary([0.0, 1.0, 0.0], q).expect("unit axis"),
        rotation_unitary([0.0, 0.0, 1.0], q).expect("unit axis"),
    )
}
