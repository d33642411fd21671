use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bargmann::bargmann_invariant;
use super::{DET_SATURATION_TOL, PSD_TOL};
use crate::error::{Error, Result};
use crate::qlinalg::matrix::{ensure_dim, hermitian_eigen, psd_diagnostics, ComplexMatrix};
use crate::qlinalg::{DensityMatrix, UnitaryOp};
use crate::report::{RelationReport, Sense};

/// `G_jk = <U_j^dag U_k>` over `U_0 = I, U_1, ..., U_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    matrix: ComplexMatrix,
}

impl GramMatrix {
    /// Number of non-identity unitaries.
    pub fn n(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[(j, k)]
    }

    pub fn det(&self) -> Complex64 {
        self.matrix.clone().lu().determinant()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Builds the Gram matrix with `U_0 = I` prepended. An empty list yields
/// the 1x1 matrix `[1]`.
pub fn gram_matrix(state: &DensityMatrix, unitaries: &[UnitaryOp]) -> Result<GramMatrix> {
    let d = state.dim();
    for u in unitaries {
        ensure_dim(d, u.dim())?;
    }
    let mut ops = Vec::with_capacity(unitaries.len() + 1);
    ops.push(UnitaryOp::identity(d));
    ops.extend(unitaries.iter().cloned());

    let size = ops.len();
    let mut g = ComplexMatrix::zeros(size, size);
    for j in 0..size {
        let uj_dag = ops[j].matrix().adjoint();
        for k in j..size {
            let v = state.expectation(&(&uj_dag * ops[k].matrix()))?;
            g[(j, k)] = v;
            g[(k, j)] = v.conj();
        }
        g[(j, j)] = Complex64::new(g[(j, j)].re, 0.0);
    }
    Ok(GramMatrix { matrix: g })
}

/// Determinant form of the relation plus the stronger positivity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UurReport {
    /// `lhs = det G`, `rhs = 0`; saturated when `|det G| <= 1e-9`.
    pub relation: RelationReport,
    pub det: Complex64,
    pub min_eigenvalue: f64,
    /// `G >= 0` within `1e-10`.
    pub psd: bool,
}

pub fn uur_evaluate(state: &DensityMatrix, unitaries: &[UnitaryOp]) -> Result<UurReport> {
    let g = gram_matrix(state, unitaries)?;
    let diag = psd_diagnostics(g.matrix())?;
    Ok(UurReport {
        relation: RelationReport::new(diag.det.re, 0.0, Sense::GreaterEq, DET_SATURATION_TOL),
        det: diag.det,
        min_eigenvalue: diag.min_eig,
        psd: diag.min_eig >= -PSD_TOL,
    })
}

/// `det G` expanded as a signed sum over permutations of `{0..n}`, each
/// term assembled from the Bargmann invariants of the permutation's
/// cycles. Cost grows as `(n+1)!`; intended as an oracle for small `n`.
pub fn permutation_expansion_det(
    state: &DensityMatrix,
    unitaries: &[UnitaryOp],
) -> Result<Complex64> {
    let d = state.dim();
    for u in unitaries {
        ensure_dim(d, u.dim())?;
    }
    if unitaries.len() > 6 {
        return Err(Error::InvalidArgument(
            "permutation expansion limited to n <= 6".into(),
        ));
    }
    let mut ops = Vec::with_capacity(unitaries.len() + 1);
    ops.push(UnitaryOp::identity(d));
    ops.extend(unitaries.iter().cloned());
    let size = ops.len();

    let mut total = Complex64::new(0.0, 0.0);
    for perm in permutations(size) {
        let cycles = cycle_decomposition(&perm);
        let sign = if (size - cycles.len()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let mut term = Complex64::new(sign, 0.0);
        for cycle in &cycles {
            if cycle.len() == 1 {
                let u = ops[cycle[0]].matrix();
                term *= state.expectation(&(u.adjoint() * u))?;
            } else {
                let members: Vec<UnitaryOp> = cycle.iter().map(|&j| ops[j].clone()).collect();
                term *= bargmann_invariant(state, &members)?.value;
            }
        }
        total += term;
    }
    Ok(total)
}

/// All permutations of `0..n` (Heap's algorithm).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![perm.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            out.push(perm.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Cycles `(j, P(j), P(P(j)), ...)` of a permutation.
fn cycle_decomposition(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j);
            j = perm[j];
        }
        cycles.push(cycle);
    }
    cycles
}

/// Smallest eigenvalue of `C - w w^dag` where `C_jk = <U_j^dag U_k>` and
/// `w_j = <U_j^dag>` (`j, k = 1..n`): the Schur complement of `G` with
/// respect to its `(0, 0)` entry, non-negative exactly when `G >= 0`.
pub fn schwarz_matrix_check(state: &DensityMatrix, unitaries: &[UnitaryOp]) -> Result<f64> {
    let n = unitaries.len();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the Schwarz matrix check needs at least one unitary".into(),
        ));
    }
    for u in unitaries {
        ensure_dim(state.dim(), u.dim())?;
    }
    let w: Vec<Complex64> = unitaries
        .iter()
        .map(|u| state.expectation(&u.matrix().adjoint()))
        .collect::<Result<_>>()?;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let uj_dag = unitaries[j].matrix().adjoint();
        for k in 0..n {
            let c_jk = state.expectation(&(&uj_dag * unitaries[k].matrix()))?;
            m[(j, k)] = c_jk - w[j] * w[k].conj();
        }
    }
    Ok(hermitian_eigen(&m).0[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::{max_abs_diff, ONE};
    use crate::qlinalg::random::{haar_unitary, random_density_matrix, seeded_rng};
    use crate::qlinalg::PureState;

    #[test]
    fn empty_list_gives_unit_matrix() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let g = gram_matrix(&rho, &[]).unwrap();
        assert_eq!(g.n(), 0);
        assert!((g.entry(0, 0) - ONE).norm() < 1e-15);
    }

    #[test]
    fn identity_gives_all_ones() {
        let rho = random_density_matrix(3, &mut seeded_rng(1));
        let g = gram_matrix(&rho, &[UnitaryOp::identity(3)]).unwrap();
        assert!(max_abs_diff(g.matrix(), &ComplexMatrix::from_element(2, 2, ONE)) < 1e-14);
        assert!(g.det().norm() < 1e-14);
    }

    #[test]
    fn sigma_x_on_zero_gives_identity() {
        let rho = PureState::basis(2, 0).unwrap().density();
        let g = gram_matrix(&rho, &[UnitaryOp::pauli_x()]).unwrap();
        assert!(max_abs_diff(g.matrix(), &ComplexMatrix::identity(2, 2)) < 1e-15);
        assert!((g.det() - ONE).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            gram_matrix(&rho, &[UnitaryOp::pauli_x()]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pure_qubit_pauli_pair_saturates() {
        let rho = PureState::basis(2, 0).unwrap().density();
        let r = uur_evaluate(&rho, &[UnitaryOp::pauli_x(), UnitaryOp::pauli_y()]).unwrap();
        assert!(r.relation.saturated && r.psd);
    }

    #[test]
    fn mixed_qubit_pauli_pair_is_strict() {
        // G = [[1,0,0],[0,1,<XY>],[0,<YX>,1]] with <XY> = <iZ> = 0 on I/2.
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let r = uur_evaluate(&rho, &[UnitaryOp::pauli_x(), UnitaryOp::pauli_y()]).unwrap();
        assert!((r.det.re - 1.0).abs() < 1e-14);
        assert!(!r.relation.saturated && r.relation.holds());
    }

    #[test]
    fn commuting_pair_saturates_on_mixed_qubit() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let u = crate::qlinalg::rotation_unitary([0.0, 0.0, 1.0], 0.6).unwrap();
        let v = crate::qlinalg::rotation_unitary([0.0, 0.0, 1.0], 1.4).unwrap();
        let r = uur_evaluate(&rho, &[u, v]).unwrap();
        assert!(r.relation.saturated, "det {}", r.det);
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(4).len(), 24);
        let mut all = permutations(3);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn expansion_matches_lu() {
        let mut rng = seeded_rng(3);
        let rho = random_density_matrix(3, &mut rng);
        let us: Vec<_> = (0..3).map(|_| haar_unitary(3, &mut rng)).collect();
        let g = gram_matrix(&rho, &us).unwrap();
        let e = permutation_expansion_det(&rho, &us).unwrap();
        assert!((g.det() - e).norm() < 1e-12);
    }

    #[test]
    fn schwarz_examples() {
        let rho = random_density_matrix(2, &mut seeded_rng(4));
        assert!(
            schwarz_matrix_check(&rho, &[UnitaryOp::identity(2)])
                .unwrap()
                .abs()
                < 1e-14
        );

        // C = [[1, i], [-i, 1]], w = 0: eigenvalues 0 and 2.
        let zero = PureState::basis(2, 0).unwrap().density();
        let m = schwarz_matrix_check(&zero, &[UnitaryOp::pauli_x(), UnitaryOp::pauli_y()]).unwrap();
        assert!(m.abs() < 1e-14);

        assert!(schwarz_matrix_check(&zero, &[]).is_err());
    }
}
