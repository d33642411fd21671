use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{DET_SATURATION_TOL, RELATION_TOL};
use crate::error::{Error, Result};
use crate::qlinalg::matrix::pauli_dot;
use crate::qlinalg::state::state_to_bloch;
use crate::qlinalg::DensityMatrix;
use crate::report::{RelationReport, Sense};

const UNIT_TOL: f64 = 1e-10;

/// Qubit observables `A = a.sigma`, `B = b.sigma` treated as unitaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitTightReport {
    /// `|<AB> - (a.b + i (a x b).r)|`.
    pub identity_residual: f64,
    /// `<A>^2 + <B>^2 - 2(a.b)<A><B> <= 1 - (a.b)^2 - ((a x b).r)^2`;
    /// equality for pure states.
    pub moment_relation: RelationReport,
    /// `dA^2 + dB^2 + 2|a.b| sqrt(1 - dA^2) sqrt(1 - dB^2) >= 1 + (a.b)^2`.
    pub tight_relation: RelationReport,
    pub bloch_length: f64,
}

fn unit(v: [f64; 3]) -> Result<Vector3<f64>> {
    let v = Vector3::from(v);
    let n = v.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitAxis { norm: n });
    }
    Ok(v)
}

pub fn qubit_tight_relation(
    state: &DensityMatrix,
    a: [f64; 3],
    b: [f64; 3],
) -> Result<QubitTightReport> {
    if state.dim() != 2 {
        return Err(Error::NotQubit { dim: state.dim() });
    }
    let av = unit(a)?;
    let bv = unit(b)?;
    let r = state_to_bloch(state)?.as_vector();
    let am = pauli_dot(a);
    let bm = pauli_dot(b);

    let ab = av.dot(&bv);
    let cross_r = av.cross(&bv).dot(&r);
    let identity_residual =
        (state.expectation(&(&am * &bm))? - crate::qlinalg::matrix::c(ab, cross_r)).norm();

    let ea = state.expectation(&am)?.re;
    let eb = state.expectation(&bm)?.re;
    let moment_relation = RelationReport::new(
        ea * ea + eb * eb - 2.0 * ab * ea * eb,
        1.0 - ab * ab - cross_r * cross_r,
        Sense::LessEq,
        DET_SATURATION_TOL,
    );

    let da = (1.0 - ea * ea).clamp(0.0, 1.0);
    let db = (1.0 - eb * eb).clamp(0.0, 1.0);
    let tight_relation = RelationReport::new(
        da + db + 2.0 * ab.abs() * (1.0 - da).sqrt() * (1.0 - db).sqrt(),
        1.0 + ab * ab,
        Sense::GreaterEq,
        RELATION_TOL,
    );
    Ok(QubitTightReport {
        identity_residual,
        moment_relation,
        tight_relation,
        bloch_length: r.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::PureState;

    #[test]
    fn orthogonal_axes_pure_along_a() {
        let rho = PureState::from_bloch([1.0, 0.0, 0.0]).unwrap().density();
        let r = qubit_tight_relation(&rho, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert!(r.identity_residual < 1e-15);
        assert!((r.tight_relation.lhs - 1.0).abs() < 1e-14);
        assert!((r.tight_relation.rhs - 1.0).abs() < 1e-14);
        assert!(r.tight_relation.saturated && r.moment_relation.saturated);
    }

    #[test]
    fn parallel_axes_give_two_for_any_state() {
        // With a = b the chain reads dA^2 + dA^2 + 2(1 - dA^2) = 2 >= 2.
        for rho in [
            DensityMatrix::maximally_mixed(2).unwrap(),
            PureState::from_bloch([0.0, 1.0, 0.0]).unwrap().density(),
        ] {
            let r = qubit_tight_relation(&rho, [0.0, 1.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
            assert!((r.tight_relation.lhs - 2.0).abs() < 1e-14);
            assert!(r.tight_relation.saturated);
        }
    }

    #[test]
    fn mixed_state_is_strict_for_moment_relation() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let r = qubit_tight_relation(&rho, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert!(!r.moment_relation.saturated && r.moment_relation.holds());
    }

    #[test]
    fn rejects_bad_inputs() {
        let q = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            qubit_tight_relation(&q, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            Err(Error::NotQubit { dim: 3 })
        ));
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(qubit_tight_relation(&rho, [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]).is_err());
    }
}
