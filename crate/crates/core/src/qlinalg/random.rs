//! Seeded samplers for test inputs.
//!
//! Every sampler takes the generator explicitly; nothing here owns global
//! state. [`seeded_rng`] and [`stream_rng`] derive reproducible ChaCha
//! streams from integer seeds.

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{c, trace, ComplexMatrix, ComplexVector};
use super::state::{bloch_to_state, BlochVector, DensityMatrix, PureState, UnitaryOp};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`; results never depend on the
/// order in which streams are consumed.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `(x + i y) / sqrt(2)` with `x, y` standard normal.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// diagonal of R normalised to positive reals.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOp {
    assert!(dim >= 1, "dimension must be positive");
    let qr = gaussian_matrix(dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOp::from_matrix_unchecked(q)
}

/// Haar unitary from an integer seed.
pub fn haar_random_unitary(dim: usize, seed: u64) -> UnitaryOp {
    haar_unitary(dim, &mut seeded_rng(seed))
}

/// Uniformly distributed pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v = ComplexVector::from_fn(dim, |_, _| complex_gaussian(rng));
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Full-rank (almost surely) mixed state `A A^dag / tr(A A^dag)`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let a = gaussian_matrix(dim, rng);
    let m = &a * a.adjoint();
    let tr = trace(&m).re;
    let m = m / c(tr, 0.0);
    DensityMatrix::from_matrix_unchecked((&m + m.adjoint()) * c(0.5, 0.0))
}

/// `w |psi><psi| + (1 - w) sigma` with `psi` pure and `sigma` from
/// [`random_density_matrix`]; `w = 1` gives a pure state.
pub fn random_blended_state<R: Rng + ?Sized>(
    dim: usize,
    pure_weight: f64,
    rng: &mut R,
) -> DensityMatrix {
    let w = pure_weight.clamp(0.0, 1.0);
    let psi = random_pure_state(dim, rng).density();
    let sigma = random_density_matrix(dim, rng);
    let m = psi.matrix() * c(w, 0.0) + sigma.matrix() * c(1.0 - w, 0.0);
    DensityMatrix::from_matrix_unchecked(m)
}

/// Random Hermitian `(A + A^dag) / 2` with complex Gaussian `A`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let a = gaussian_matrix(dim, rng);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

pub fn random_unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let n = v.norm();
        if n > 1e-6 {
            let u = v / n;
            return [u.x, u.y, u.z];
        }
    }
}

/// Qubit state with a uniformly random Bloch direction and fixed radius.
pub fn random_qubit_with_radius<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> DensityMatrix {
    let n = random_unit_vector3(rng);
    let r = radius.clamp(0.0, 1.0);
    bloch_to_state(&BlochVector::new([n[0] * r, n[1] * r, n[2] * r]).expect("radius <= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::{hermitian_deviation, hermitian_eigen, identity, max_abs_diff};

    #[test]
    fn scalar_unitary_has_unit_modulus() {
        let u = haar_random_unitary(1, 9);
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seed_determinism() {
        let a = haar_random_unitary(2, 42);
        let b = haar_random_unitary(2, 42);
        assert_eq!(a, b);
        assert_ne!(a, haar_random_unitary(2, 43));
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = seeded_rng(5);
        for d in 1..=5 {
            let u = haar_unitary(d, &mut rng);
            assert!(max_abs_diff(&(u.matrix().adjoint() * u.matrix()), &identity(d)) < 1e-12);
        }
    }

    #[test]
    fn haar_second_moment() {
        // E|U_00|^2 = 1/d over the Haar measure.
        let mut rng = seeded_rng(2024);
        let draws = 100_000;
        let mean = (0..draws)
            .map(|_| haar_unitary(2, &mut rng).matrix()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn haar_left_invariance() {
        // The law of W U matches that of U: compare E|(WU)_00|^4 with the
        // Haar value 2 / (d (d + 1)) = 1/3 for d = 2.
        let w = haar_random_unitary(2, 77);
        let mut rng = seeded_rng(78);
        let draws = 40_000;
        let m4 = (0..draws)
            .map(|_| {
                let u = haar_unitary(2, &mut rng);
                (w.matrix() * u.matrix())[(0, 0)].norm_sqr().powi(2)
            })
            .sum::<f64>()
            / draws as f64;
        assert!((m4 - 1.0 / 3.0).abs() < 0.01, "fourth moment {m4}");
    }

    #[test]
    fn sampled_states_are_valid() {
        let mut rng = seeded_rng(11);
        for d in 1..=4 {
            for _ in 0..20 {
                let rho = random_density_matrix(d, &mut rng);
                assert!(hermitian_deviation(rho.matrix()) < 1e-12);
                assert!((trace(rho.matrix()).re - 1.0).abs() < 1e-12);
                assert!(hermitian_eigen(rho.matrix()).0[0] >= -1e-10);
                assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());

                let blended = random_blended_state(d, 0.7, &mut rng);
                assert!(DensityMatrix::new(blended.matrix().clone()).is_ok());
            }
        }
    }

    #[test]
    fn stream_rngs_are_independent_of_order() {
        let a: f64 = stream_rng(3, 1).random();
        let _ = stream_rng(3, 0).random::<f64>();
        let b: f64 = stream_rng(3, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, stream_rng(3, 2).random::<f64>());
    }
}
