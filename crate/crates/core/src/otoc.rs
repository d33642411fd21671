//! Out-of-time-order correlators and the bounds the two-unitary relation
//! places on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qlinalg::matrix::{ensure_dim, ensure_hermitian, exp_i_hermitian, ComplexMatrix};
use crate::qlinalg::{DensityMatrix, UnitaryOp};
use crate::report::{RelationReport, Sense};

pub const OTOC_TOL: f64 = 1e-10;

/// `F = <W^dag V^dag W V>`.
pub fn otoc_value(state: &DensityMatrix, v: &UnitaryOp, w: &UnitaryOp) -> Result<Complex64> {
    ensure_dim(state.dim(), v.dim())?;
    ensure_dim(state.dim(), w.dim())?;
    let (vm, wm) = (v.matrix(), w.matrix());
    state.expectation(&(wm.adjoint() * vm.adjoint() * wm * vm))
}

/// `uv + sqrt((1 - u^2)(1 - v^2)) = cos(theta_u - theta_v)` for moduli
/// `u, v` clamped into `[0, 1]`.
fn cos_angle_difference(u: f64, v: f64) -> f64 {
    let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
    u * v + ((1.0 - u * u) * (1.0 - v * v)).sqrt()
}

/// `|<U^dag V>| <= cos(theta_U - theta_V)` with `theta_U = arccos |<U>|`.
pub fn overlap_bound(
    state: &DensityMatrix,
    u: &UnitaryOp,
    v: &UnitaryOp,
) -> Result<RelationReport> {
    ensure_dim(state.dim(), u.dim())?;
    ensure_dim(state.dim(), v.dim())?;
    let lhs = state
        .expectation(&(u.matrix().adjoint() * v.matrix()))?
        .norm();
    let mu = state.expectation(u.matrix())?.norm();
    let mv = state.expectation(v.matrix())?.norm();
    Ok(RelationReport::new(
        lhs,
        cos_angle_difference(mu, mv),
        Sense::LessEq,
        OTOC_TOL,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OtocReport {
    #[serde(rename = "F")]
    pub f: Complex64,
    /// `arccos |<V W_t>|`.
    pub theta_vw: f64,
    /// `arccos |<W_t V>|`.
    pub theta_wv: f64,
    /// `cos(theta_vw - theta_wv)`, the bound on `|F|`.
    pub modulus_bound: f64,
    /// `2 (1 - Re F) = <|[V, W_t]|^2>`.
    pub commutator_lhs: f64,
    /// `4 sin^2((theta_vw - theta_wv) / 2)`.
    pub commutator_rhs: f64,
    /// `|F| <= modulus_bound`.
    pub upper: RelationReport,
    /// `commutator_lhs >= commutator_rhs`.
    pub lower: RelationReport,
}

impl OtocReport {
    pub fn holds(&self) -> bool {
        self.upper.holds() && self.lower.holds()
    }
}

pub fn otoc_bounds(state: &DensityMatrix, v: &UnitaryOp, w_t: &UnitaryOp) -> Result<OtocReport> {
    let f = otoc_value(state, v, w_t)?;
    let (vm, wm) = (v.matrix(), w_t.matrix());
    let m_vw = state.expectation(&(vm * wm))?.norm().clamp(0.0, 1.0);
    let m_wv = state.expectation(&(wm * vm))?.norm().clamp(0.0, 1.0);
    let modulus_bound = cos_angle_difference(m_vw, m_wv);
    let commutator_lhs = 2.0 * (1.0 - f.re);
    let commutator_rhs = 2.0 * (1.0 - modulus_bound);
    Ok(OtocReport {
        f,
        theta_vw: m_vw.acos(),
        theta_wv: m_wv.acos(),
        modulus_bound,
        commutator_lhs,
        commutator_rhs,
        upper: RelationReport::new(f.norm(), modulus_bound, Sense::LessEq, OTOC_TOL),
        lower: RelationReport::new(commutator_lhs, commutator_rhs, Sense::GreaterEq, OTOC_TOL),
    })
}

/// `W_t = e^{iHt} W e^{-iHt}`; `t = 0` returns `W` unchanged.
pub fn heisenberg_evolve(w: &UnitaryOp, h: &ComplexMatrix, t: f64) -> Result<UnitaryOp> {
    let n = ensure_hermitian(h)?;
    ensure_dim(w.dim(), n)?;
    if t == 0.0 {
        return Ok(w.clone());
    }
    let e = exp_i_hermitian(h, t)?;
    Ok(UnitaryOp::from_matrix_unchecked(
        &e * w.matrix() * e.adjoint(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::max_abs_diff;
    use crate::qlinalg::random::{random_density_matrix, random_hermitian};
    use crate::qlinalg::{haar_unitary, rotation_unitary, seeded_rng, sigma_x, sigma_z, PureState};
    use std::f64::consts::PI;

    #[test]
    fn commuting_rotations_give_one() {
        let rho = random_density_matrix(2, &mut seeded_rng(1));
        let v = rotation_unitary([0.0, 0.0, 1.0], 0.4).unwrap();
        let w = rotation_unitary([0.0, 0.0, 1.0], 1.3).unwrap();
        let r = otoc_bounds(&rho, &v, &w).unwrap();
        assert!((r.f - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(r.commutator_lhs.abs() < 1e-14 && r.holds());
    }

    #[test]
    fn pauli_pair() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let r = otoc_bounds(&rho, &UnitaryOp::pauli_x(), &UnitaryOp::pauli_y()).unwrap();
        assert_eq!(r.f, Complex64::new(-1.0, 0.0));
        assert!((r.modulus_bound - 1.0).abs() < 1e-15);
        assert!((r.commutator_lhs - 4.0).abs() < 1e-15 && r.commutator_rhs.abs() < 1e-15);
        assert!(r.holds());
    }

    #[test]
    fn trace_oracle_qutrit() {
        let mut rng = seeded_rng(2);
        let rho = random_density_matrix(3, &mut rng);
        let v = haar_unitary(3, &mut rng);
        let w = haar_unitary(3, &mut rng);
        let f = otoc_value(&rho, &v, &w).unwrap();
        // tr(rho W^dag V^dag W V) entry by entry.
        let (r, vm, wm) = (rho.matrix(), v.matrix(), w.matrix());
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        for e in 0..3 {
                            acc += r[(a, b)]
                                * wm[(c, b)].conj()
                                * vm[(d, c)].conj()
                                * wm[(d, e)]
                                * vm[(e, a)];
                        }
                    }
                }
            }
        }
        assert!((f - acc).norm() < 1e-12);
    }

    #[test]
    fn overlap_bound_examples() {
        let zero = PureState::basis(2, 0).unwrap().density();
        let r = overlap_bound(&zero, &UnitaryOp::pauli_x(), &UnitaryOp::pauli_y()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && r.saturated);
        let u = haar_unitary(2, &mut seeded_rng(5));
        let r = overlap_bound(&zero, &u, &u).unwrap();
        assert!(r.saturated);
    }

    #[test]
    fn heisenberg_examples() {
        let w = UnitaryOp::pauli_x();
        assert_eq!(heisenberg_evolve(&w, &sigma_z(), 0.0).unwrap(), w);
        let wt = heisenberg_evolve(&w, &sigma_z(), PI / 2.0).unwrap();
        assert!(max_abs_diff(wt.matrix(), &(-sigma_x())) < 1e-14);

        let z = UnitaryOp::pauli_z();
        let zt = heisenberg_evolve(&z, &sigma_z(), 0.8).unwrap();
        assert!(max_abs_diff(zt.matrix(), z.matrix()) < 1e-14);

        let mut bad = sigma_z();
        bad[(0, 1)] = crate::qlinalg::matrix::c(1.0, 0.0);
        assert!(heisenberg_evolve(&w, &bad, 1.0).is_err());
    }

    #[test]
    fn evolution_sweep_holds() {
        let mut rng = seeded_rng(6);
        let rho = random_density_matrix(2, &mut rng);
        let h = random_hermitian(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let w = haar_unitary(2, &mut rng);
        for t in [0.0, 0.5, 1.0] {
            let wt = heisenberg_evolve(&w, &h, t).unwrap();
            assert!(otoc_bounds(&rho, &v, &wt).unwrap().holds());
        }
    }
}
