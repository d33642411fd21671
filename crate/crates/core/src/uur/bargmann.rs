use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::matrix::ensure_dim;
use crate::qlinalg::{DensityMatrix, UnitaryOp};

/// A complex Bargmann invariant with its polar form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BargmannValue {
    pub value: Complex64,
    pub modulus: f64,
    /// Principal argument in `(-pi, pi]`.
    pub phase: f64,
}

impl BargmannValue {
    pub fn from_value(value: Complex64) -> Self {
        Self {
            value,
            modulus: value.norm(),
            phase: principal_arg(value),
        }
    }
}

/// `arg z` mapped into `(-pi, pi]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -std::f64::consts::PI {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

/// Generalised Bargmann invariant of a cyclic list of unitaries,
/// `<U_1^dag U_2> <U_2^dag U_3> ... <U_m^dag U_1>`.
///
/// For a pure state this is the projective invariant
/// `<psi_1|psi_2><psi_2|psi_3>...<psi_m|psi_1>` with `|psi_j> = U_j|psi>`,
/// and each factor is a Gram-matrix entry, so cycles of a permutation
/// multiply out to the terms of `det G`. Invariant under rephasing any `U_j`.
pub fn bargmann_invariant(state: &DensityMatrix, unitaries: &[UnitaryOp]) -> Result<BargmannValue> {
    let m = unitaries.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "a Bargmann invariant needs at least 2 unitaries, got {m}"
        )));
    }
    for u in unitaries {
        ensure_dim(state.dim(), u.dim())?;
    }
    let mut value = Complex64::new(1.0, 0.0);
    for j in 0..m {
        let next = &unitaries[(j + 1) % m];
        let op = unitaries[j].matrix().adjoint() * next.matrix();
        value *= state.expectation(&op)?;
    }
    Ok(BargmannValue::from_value(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{rotation_between, PureState};
    use std::f64::consts::PI;

    #[test]
    fn identities_give_one() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let b = bargmann_invariant(&rho, &vec![UnitaryOp::identity(3); 4]).unwrap();
        assert!((b.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(b.phase, 0.0);
    }

    #[test]
    fn orthogonal_leg_gives_zero() {
        let rho = PureState::basis(2, 0).unwrap().density();
        let h = crate::qlinalg::rotation_unitary(
            [
                std::f64::consts::FRAC_1_SQRT_2,
                0.0,
                std::f64::consts::FRAC_1_SQRT_2,
            ],
            PI,
        )
        .unwrap();
        let b =
            bargmann_invariant(&rho, &[UnitaryOp::identity(2), UnitaryOp::pauli_x(), h]).unwrap();
        assert!(b.modulus < 1e-15);
    }

    #[test]
    fn octant_triple() {
        // States x+, y+, z+ reached from z+ by rotations.
        let z = [0.0, 0.0, 1.0];
        let u1 = rotation_between(z, [1.0, 0.0, 0.0]).unwrap();
        let u2 = rotation_between(z, [0.0, 1.0, 0.0]).unwrap();
        let rho = PureState::basis(2, 0).unwrap().density();
        let b = bargmann_invariant(&rho, &[u1, u2, UnitaryOp::identity(2)]).unwrap();
        // Direct inner products: <x+|y+><y+|z+><z+|x+> = (1+i)/2 * 1/sqrt2 * 1/sqrt2.
        assert!((b.value - Complex64::new(0.25, 0.25)).norm() < 1e-14);
        assert!((b.phase - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn too_short_cycle_rejected() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(bargmann_invariant(&rho, &[UnitaryOp::pauli_x()]).is_err());
    }

    #[test]
    fn principal_branch() {
        assert_eq!(principal_arg(Complex64::new(-1.0, 0.0)), PI);
        assert_eq!(principal_arg(Complex64::new(-1.0, -0.0)), PI);
    }
}
