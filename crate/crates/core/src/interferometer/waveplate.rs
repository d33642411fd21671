use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::matrix::{c, ComplexMatrix, ZERO};
use crate::qlinalg::{DensityMatrix, UnitaryOp};

/// Element order of a HWP/QWP/HWP/QWP group, both QWPs at 45 degrees.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// Photon meets HWP(alpha), QWP(45), HWP(beta), QWP(45) in that order.
    #[default]
    #[serde(rename = "hqhq-alpha-first")]
    AlphaFirst,
    /// Photon meets HWP(beta), QWP(45), HWP(alpha), QWP(45).
    #[serde(rename = "hqhq-beta-first")]
    BetaFirst,
}

impl Convention {
    pub fn id(self) -> &'static str {
        match self {
            Convention::AlphaFirst => "hqhq-alpha-first",
            Convention::BetaFirst => "hqhq-beta-first",
        }
    }
}

/// Half-wave plate angles of one arm, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveplateStack {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub convention: Convention,
}

impl WaveplateStack {
    /// Angles are reduced into `[0, 180)`; a plate at `theta + 180` is
    /// the same element.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_convention(alpha, beta, Convention::default())
    }

    pub fn with_convention(alpha: f64, beta: f64, convention: Convention) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidArgument(
                "waveplate angles must be finite".into(),
            ));
        }
        Ok(Self {
            alpha: alpha.rem_euclid(180.0),
            beta: beta.rem_euclid(180.0),
            convention,
        })
    }

    /// Setting that implements the identity.
    pub fn identity() -> Self {
        Self {
            alpha: 90.0,
            beta: 0.0,
            convention: Convention::default(),
        }
    }

    /// Same stack with both angles shifted (degrees).
    pub fn perturbed(&self, d_alpha: f64, d_beta: f64) -> Self {
        Self {
            alpha: (self.alpha + d_alpha).rem_euclid(180.0),
            beta: (self.beta + d_beta).rem_euclid(180.0),
            convention: self.convention,
        }
    }
}

fn rot(theta: f64) -> ComplexMatrix {
    let (s, co) = theta.sin_cos();
    ComplexMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

fn retarder(theta_deg: f64, slow: crate::Complex64) -> ComplexMatrix {
    let t = theta_deg.to_radians();
    let d = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), ZERO, ZERO, slow]);
    rot(t) * d * rot(-t)
}

/// Jones matrix of a half-wave plate with fast axis at `theta_deg`.
pub fn hwp(theta_deg: f64) -> ComplexMatrix {
    retarder(theta_deg, c(-1.0, 0.0))
}

/// Jones matrix of a quarter-wave plate with fast axis at `theta_deg`.
pub fn qwp(theta_deg: f64) -> ComplexMatrix {
    retarder(theta_deg, c(0.0, 1.0))
}

/// Product of the four Jones matrices in traversal order.
pub fn waveplate_stack_unitary(stack: &WaveplateStack) -> UnitaryOp {
    let (first, second) = match stack.convention {
        Convention::AlphaFirst => (stack.alpha, stack.beta),
        Convention::BetaFirst => (stack.beta, stack.alpha),
    };
    let q = qwp(45.0);
    let m = &q * hwp(second) * &q * hwp(first);
    UnitaryOp::from_matrix_unchecked(m)
}

/// `<N>_chi = (1 + Re(e^{-i chi} <U^dag V>)) / 2`.
pub fn mean_output(state: &DensityMatrix, u: &UnitaryOp, v: &UnitaryOp, chi: f64) -> Result<f64> {
    crate::qlinalg::matrix::ensure_dim(state.dim(), u.dim())?;
    crate::qlinalg::matrix::ensure_dim(state.dim(), v.dim())?;
    let g = state.expectation(&(u.matrix().adjoint() * v.matrix()))?;
    let n = 0.5 * (1.0 + (crate::Complex64::from_polar(1.0, -chi) * g).re);
    Ok(n.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::{identity, max_abs_diff};
    use crate::qlinalg::{rotation_unitary, seeded_rng, PureState};
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn identity_setting() {
        for conv in [Convention::AlphaFirst, Convention::BetaFirst] {
            let s = WaveplateStack::with_convention(90.0, 0.0, conv).unwrap();
            let u = waveplate_stack_unitary(&s);
            assert!(u.equals_up_to_phase(&UnitaryOp::identity(2), 1e-12));
        }
    }

    #[test]
    fn random_stacks_are_unitary() {
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let s = WaveplateStack::new(rng.random_range(0.0..180.0), rng.random_range(0.0..180.0))
                .unwrap();
            let m = waveplate_stack_unitary(&s).into_matrix();
            assert!(max_abs_diff(&(m.adjoint() * &m), &identity(2)) < 1e-12);
        }
    }

    #[test]
    fn experiment_operators() {
        let u = waveplate_stack_unitary(&WaveplateStack::new(36.0, 0.0).unwrap());
        let v = waveplate_stack_unitary(&WaveplateStack::new(0.0, 36.0).unwrap());
        assert!(!u.commutes_with(&v, 1e-6));
        // 144 degree rotations about y and z respectively.
        let ry = rotation_unitary([0.0, 1.0, 0.0], 144f64.to_radians()).unwrap();
        let rz = rotation_unitary([0.0, 0.0, 1.0], 144f64.to_radians()).unwrap();
        assert!(u.equals_up_to_phase(&ry, 1e-12) || u.equals_up_to_phase(&ry.adjoint(), 1e-12));
        assert!(v.equals_up_to_phase(&rz, 1e-12) || v.equals_up_to_phase(&rz.adjoint(), 1e-12));
    }

    #[test]
    fn angles_reduced() {
        let s = WaveplateStack::new(200.0, -10.0).unwrap();
        assert!((s.alpha - 20.0).abs() < 1e-12 && (s.beta - 170.0).abs() < 1e-12);
        assert!(WaveplateStack::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn plate_examples() {
        assert!(max_abs_diff(&hwp(0.0), &crate::qlinalg::sigma_z()) < 1e-15);
        assert!(max_abs_diff(&hwp(45.0), &crate::qlinalg::sigma_x()) < 1e-15);
    }

    #[test]
    fn mean_output_examples() {
        let rho = PureState::basis(2, 0).unwrap().density();
        let i = UnitaryOp::identity(2);
        assert!((mean_output(&rho, &i, &i, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(mean_output(&rho, &i, &i, PI).unwrap().abs() < 1e-15);
        for chi in [0.0, 1.0, 2.5] {
            assert!(
                (mean_output(&rho, &UnitaryOp::pauli_x(), &i, chi).unwrap() - 0.5).abs() < 1e-15
            );
        }
    }
}
