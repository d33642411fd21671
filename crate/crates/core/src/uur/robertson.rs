use serde::{Deserialize, Serialize};

use super::pair::uur_pair;
use super::RELATION_TOL;
use crate::error::{Error, Result};
use crate::qlinalg::matrix::{ensure_dim, ensure_hermitian, exp_i_hermitian, ComplexMatrix};
use crate::qlinalg::{DensityMatrix, UnitaryOp};
use crate::report::{RelationReport, Sense};

/// `<A^2> - <A>^2` for Hermitian `A`.
pub fn variance_hermitian(state: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    covariance_hermitian(state, a, a)
}

/// Symmetrised covariance `(1/2)<AB + BA> - <A><B>`.
pub fn covariance_hermitian(
    state: &DensityMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<f64> {
    let ma = state.expectation(a)?.re;
    let mb = state.expectation(b)?.re;
    let anti = state.expectation(&(a * b + b * a))?.re;
    Ok(0.5 * anti - ma * mb)
}

fn check_observable(state: &DensityMatrix, a: &ComplexMatrix) -> Result<()> {
    let n = ensure_hermitian(a)?;
    ensure_dim(state.dim(), n)
}

/// `Var A Var B >= |<[A, B]>|^2 / 4 + Cov(A, B)^2`.
pub fn rs_pair(
    state: &DensityMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<RelationReport> {
    check_observable(state, a)?;
    check_observable(state, b)?;
    let lhs = variance_hermitian(state, a)? * variance_hermitian(state, b)?;
    let comm = state.expectation(&(a * b - b * a))?;
    let cov = covariance_hermitian(state, a, b)?;
    let rhs = 0.25 * comm.norm_sqr() + cov * cov;
    Ok(RelationReport::new(
        lhs,
        rhs,
        Sense::GreaterEq,
        RELATION_TOL,
    ))
}

/// Two-unitary relation for `U = e^{i eps A}`, `V = e^{i eps B}` at one `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsLimitRow {
    pub eps: f64,
    /// `Var U / eps^2`.
    pub var_u_scaled: f64,
    /// `Var V / eps^2`.
    pub var_v_scaled: f64,
    /// `Var U Var V / eps^4`.
    pub lhs_scaled: f64,
    /// `|<U^dag V> - <U^dag><V>|^2 / eps^4`.
    pub rhs_scaled: f64,
    /// `|lhs_scaled - Var A Var B|`.
    pub lhs_error: f64,
    /// `|rhs_scaled - rhs_RS|`.
    pub rhs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsLimitTable {
    pub var_a: f64,
    pub var_b: f64,
    /// Robertson–Schrödinger right-hand side at the limit.
    pub rs_rhs: f64,
    pub rows: Vec<RsLimitRow>,
    /// Smallest `C` with `error <= C eps` over all rows, per side.
    pub c_lhs: f64,
    pub c_rhs: f64,
    /// `error(eps_k) / error(eps_{k+1})` for successive rows.
    pub lhs_ratios: Vec<f64>,
    pub rhs_ratios: Vec<f64>,
}

impl RsLimitTable {
    /// True when every error is within `c * eps` with the fitted constants.
    pub fn within_linear_bound(&self) -> bool {
        self.rows.iter().all(|r| {
            r.lhs_error <= self.c_lhs * r.eps * (1.0 + 1e-12)
                && r.rhs_error <= self.c_rhs * r.eps * (1.0 + 1e-12)
        })
    }
}

/// Evaluates the two-unitary relation at each `eps` in `eps_list` and
/// compares the scaled sides with the Robertson–Schrödinger limit.
pub fn rs_limit_probe(
    state: &DensityMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    eps_list: &[f64],
) -> Result<RsLimitTable> {
    check_observable(state, a)?;
    check_observable(state, b)?;
    if let Some(&bad) = eps_list.iter().find(|&&e| !(e > 0.0 && e <= 0.5)) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 0.5], got {bad}"
        )));
    }
    let var_a = variance_hermitian(state, a)?;
    let var_b = variance_hermitian(state, b)?;
    let limit = rs_pair(state, a, b)?;

    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let u = UnitaryOp::from_matrix_unchecked(exp_i_hermitian(a, eps)?);
        let v = UnitaryOp::from_matrix_unchecked(exp_i_hermitian(b, eps)?);
        let pair = uur_pair(state, &u, &v)?;
        let e2 = eps * eps;
        let e4 = e2 * e2;
        let var_u_scaled = (1.0 - state.expectation(u.matrix())?.norm_sqr()) / e2;
        let var_v_scaled = (1.0 - state.expectation(v.matrix())?.norm_sqr()) / e2;
        let lhs_scaled = pair.lhs / e4;
        let rhs_scaled = pair.rhs / e4;
        rows.push(RsLimitRow {
            eps,
            var_u_scaled,
            var_v_scaled,
            lhs_scaled,
            rhs_scaled,
            lhs_error: (lhs_scaled - limit.lhs).abs(),
            rhs_error: (rhs_scaled - limit.rhs).abs(),
        });
    }
    let c_lhs = rows.iter().map(|r| r.lhs_error / r.eps).fold(0.0, f64::max);
    let c_rhs = rows.iter().map(|r| r.rhs_error / r.eps).fold(0.0, f64::max);
    let ratios = |f: fn(&RsLimitRow) -> f64| -> Vec<f64> {
        rows.windows(2).map(|w| f(&w[0]) / f(&w[1])).collect()
    };
    let lhs_ratios = ratios(|r| r.lhs_error);
    let rhs_ratios = ratios(|r| r.rhs_error);
    Ok(RsLimitTable {
        var_a,
        var_b,
        rs_rhs: limit.rhs,
        rows,
        c_lhs,
        c_rhs,
        lhs_ratios,
        rhs_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{sigma_x, sigma_y, PureState};

    fn zero() -> DensityMatrix {
        PureState::basis(2, 0).unwrap().density()
    }

    #[test]
    fn pauli_example() {
        let r = rs_pair(&zero(), &sigma_x(), &sigma_y()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn self_pair_saturates() {
        let rho =
            crate::qlinalg::random::random_density_matrix(3, &mut crate::qlinalg::seeded_rng(8));
        let a = crate::qlinalg::random::random_hermitian(3, &mut crate::qlinalg::seeded_rng(9));
        let r = rs_pair(&rho, &a, &a).unwrap();
        assert!(r.saturated);
        let v = variance_hermitian(&rho, &a).unwrap();
        assert!((r.lhs - v * v).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = sigma_x();
        m[(0, 1)] = crate::qlinalg::matrix::c(2.0, 0.0);
        assert!(matches!(
            rs_pair(&zero(), &m, &sigma_y()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eps_bounds() {
        assert!(rs_limit_probe(&zero(), &sigma_x(), &sigma_y(), &[0.0]).is_err());
        assert!(rs_limit_probe(&zero(), &sigma_x(), &sigma_y(), &[0.6]).is_err());
    }

    #[test]
    fn limit_converges() {
        let t = rs_limit_probe(&zero(), &sigma_x(), &sigma_y(), &[0.1, 0.01, 0.001]).unwrap();
        for r in &t.rows {
            assert!((r.var_u_scaled - 1.0).abs() < r.eps);
            assert!((r.var_v_scaled - 1.0).abs() < r.eps);
            assert!((r.rhs_scaled - 1.0).abs() < 2.0 * r.eps);
        }
        assert!(t.within_linear_bound());
    }
}
