//! Validated state and operator types.

use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{
    c, ensure_dim, ensure_square, hermitian_deviation, hermitian_eigen, identity, max_abs_diff,
    pauli_dot, psd_sqrt, sigma_x, sigma_y, sigma_z, trace, trace_of_product, ComplexMatrix,
    ComplexVector, ONE,
};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;
const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
const DENSITY_TRACE_TOL: f64 = 1e-12;
const DENSITY_EIG_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const AXIS_TOL: f64 = 1e-10;

/// A normalised state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        Self::new(amplitudes.unscale(norm))
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::normalized(ComplexVector::from_column_slice(amplitudes))
    }

    /// Computational basis state `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if k >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut v = ComplexVector::zeros(dim);
        v[k] = ONE;
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `<psi| op |psi>`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        ensure_square(op)?;
        ensure_dim(self.dim(), op.nrows())?;
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)))
    }

    pub fn apply(&self, u: &UnitaryOp) -> Result<PureState> {
        ensure_dim(self.dim(), u.dim())?;
        Ok(Self {
            amplitudes: u.matrix() * &self.amplitudes,
        })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// Bloch vector of a qubit state.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        state_to_bloch(&self.density())
    }

    /// Qubit state with the given unit Bloch vector.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if (n - 1.0).abs() > AXIS_TOL {
            return Err(Error::NonUnitAxis { norm: n });
        }
        let polar = r[2].clamp(-1.0, 1.0).acos();
        let azimuth = r[1].atan2(r[0]);
        Ok(Self {
            amplitudes: ComplexVector::from_column_slice(&[
                c((polar / 2.0).cos(), 0.0),
                Complex64::from_polar((polar / 2.0).sin(), azimuth),
            ]),
        })
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        ensure_square(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - ONE).norm() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let (values, _) = hermitian_eigen(&matrix);
        if values[0] < -DENSITY_EIG_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:e}",
                values[0]
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Self {
            matrix: identity(dim) * c(1.0 / dim as f64, 0.0),
        })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.density()
    }

    /// Convex combination `sum_k p_k rho_k`. Weights must be non-negative
    /// and sum to one.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut total = 0.0;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (p, rho) in components {
            ensure_dim(dim, rho.dim())?;
            if p.is_nan() || *p < 0.0 {
                return Err(Error::InvalidArgument(format!("negative weight {p}")));
            }
            total += p;
            acc += &rho.matrix * c(*p, 0.0);
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {total}")));
        }
        Ok(Self { matrix: acc })
    }

    /// `p rho + (1 - p) I/d`.
    pub fn depolarized(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfUnitInterval {
                what: "mixing weight",
                value: p,
            });
        }
        let d = self.dim();
        Ok(Self {
            matrix: &self.matrix * c(p, 0.0) + identity(d) * c((1.0 - p) / d as f64, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `tr(rho op)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        ensure_square(op)?;
        ensure_dim(self.dim(), op.nrows())?;
        Ok(trace_of_product(&self.matrix, op))
    }

    pub fn purity(&self) -> f64 {
        trace_of_product(&self.matrix, &self.matrix).re
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        psd_sqrt(&self.matrix)
    }

    /// `U rho U^dag`.
    pub fn transformed(&self, u: &UnitaryOp) -> Result<Self> {
        ensure_dim(self.dim(), u.dim())?;
        Ok(Self {
            matrix: u.matrix() * &self.matrix * u.matrix().adjoint(),
        })
    }
}

/// `tr(rho op)`; see [`DensityMatrix::expectation`].
pub fn expectation(state: &DensityMatrix, op: &ComplexMatrix) -> Result<Complex64> {
    state.expectation(op)
}

/// A unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: ComplexMatrix,
}

impl UnitaryOp {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        let deviation = max_abs_diff(&(matrix.adjoint() * &matrix), &identity(n));
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: identity(dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self { matrix: sigma_x() }
    }

    pub fn pauli_y() -> Self {
        Self { matrix: sigma_y() }
    }

    pub fn pauli_z() -> Self {
        Self { matrix: sigma_z() }
    }

    /// `a . sigma` for a unit vector `a`; Hermitian and unitary.
    pub fn pauli_along(a: [f64; 3]) -> Result<Self> {
        check_unit(a)?;
        Ok(Self {
            matrix: pauli_dot(a),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self * other`.
    pub fn compose(&self, other: &UnitaryOp) -> Result<Self> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `e^{i phi} U`.
    pub fn with_phase(&self, phi: f64) -> Self {
        Self {
            matrix: &self.matrix * Complex64::from_polar(1.0, phi),
        }
    }

    /// True when `self` and `other` differ only by a global phase.
    pub fn equals_up_to_phase(&self, other: &UnitaryOp, tol: f64) -> bool {
        self.dim() == other.dim()
            && (super::matrix::phase_insensitive_fidelity(&self.matrix, &other.matrix) - 1.0).abs()
                <= tol
    }

    pub fn commutes_with(&self, other: &UnitaryOp, tol: f64) -> bool {
        self.dim() == other.dim()
            && max_abs_diff(
                &(&self.matrix * &other.matrix),
                &(&other.matrix * &self.matrix),
            ) <= tol
    }
}

impl Mul for &UnitaryOp {
    type Output = UnitaryOp;

    /// Panics on dimension mismatch; use [`UnitaryOp::compose`] for a fallible product.
    fn mul(self, rhs: &UnitaryOp) -> UnitaryOp {
        self.compose(rhs).expect("unitary dimensions must match")
    }
}

/// A qubit Bloch vector, `|r| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    r: [f64; 3],
}

impl BlochVector {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let length = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if length > 1.0 + 1e-12 {
            return Err(Error::BlochVectorTooLong { length });
        }
        Ok(Self { r })
    }

    pub fn components(&self) -> [f64; 3] {
        self.r
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::from(self.r)
    }

    pub fn length(&self) -> f64 {
        self.as_vector().norm()
    }
}

/// `rho = (I + r . sigma) / 2`.
pub fn bloch_to_state(r: &BlochVector) -> DensityMatrix {
    let m = (identity(2) + pauli_dot(r.r)) * c(0.5, 0.0);
    DensityMatrix::from_matrix_unchecked(m)
}

/// Pauli coefficients `r_k = tr(rho sigma_k)` of a qubit state.
pub fn state_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::NotQubit { dim: rho.dim() });
    }
    let m = rho.matrix();
    let r = [
        2.0 * m[(0, 1)].re,
        -2.0 * m[(0, 1)].im,
        (m[(0, 0)] - m[(1, 1)]).re,
    ];
    // Clip roundoff above unit length for pure states.
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if len > 1.0 && len <= 1.0 + 1e-12 {
        return BlochVector::new([r[0] / len, r[1] / len, r[2] / len]);
    }
    BlochVector::new(r)
}

fn check_unit(a: [f64; 3]) -> Result<Vector3<f64>> {
    let v = Vector3::from(a);
    let norm = v.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOL {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(v)
}

/// `cos(angle/2) I + i sin(angle/2) axis . sigma`.
///
/// Under `rho -> U rho U^dag` the Bloch vector turns through `angle` about
/// `axis` in the clockwise sense, i.e. by the right-handed rotation
/// `R(axis, -angle)`.
pub fn rotation_unitary(axis: [f64; 3], angle: f64) -> Result<UnitaryOp> {
    check_unit(axis)?;
    let (s, co) = (angle / 2.0).sin_cos();
    let m = identity(2) * c(co, 0.0) + pauli_dot(axis) * c(0.0, s);
    Ok(UnitaryOp::from_matrix_unchecked(m))
}

/// A rotation unitary carrying the Bloch direction `from` onto `to`.
pub fn rotation_between(from: [f64; 3], to: [f64; 3]) -> Result<UnitaryOp> {
    let a = check_unit(from)?;
    let b = check_unit(to)?;
    let cross = a.cross(&b);
    let sin = cross.norm();
    let cos = a.dot(&b);
    let angle = sin.atan2(cos);
    if sin < 1e-14 {
        if cos > 0.0 {
            return Ok(UnitaryOp::identity(2));
        }
        // Antiparallel: any axis perpendicular to `a`.
        let trial = if a.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let axis = a.cross(&trial).normalize();
        return rotation_unitary([axis.x, axis.y, axis.z], std::f64::consts::PI);
    }
    let axis = cross / sin;
    rotation_unitary([axis.x, axis.y, axis.z], -angle)
}

/// The SO(3) matrix `R_jk = tr(sigma_j U sigma_k U^dag) / 2` induced on
/// Bloch vectors by a qubit unitary.
pub fn bloch_rotation_matrix(u: &UnitaryOp) -> Result<Matrix3<f64>> {
    if u.dim() != 2 {
        return Err(Error::NotQubit { dim: u.dim() });
    }
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let m = u.matrix();
    let conj: Vec<ComplexMatrix> = paulis.iter().map(|s| m * s * m.adjoint()).collect();
    Ok(Matrix3::from_fn(|j, k| {
        0.5 * trace_of_product(&paulis[j], &conj[k]).re
    }))
}

/// Rotation axis of a qubit unitary, or `None` when it acts as the
/// identity up to phase. The sign of the axis is arbitrary.
pub fn rotation_axis(u: &UnitaryOp) -> Result<Option<[f64; 3]>> {
    if u.dim() != 2 {
        return Err(Error::NotQubit { dim: u.dim() });
    }
    let m = u.matrix();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let su = m / det.sqrt();
    // su = cos I + i sin n.sigma
    let n = Vector3::new(su[(0, 1)].im, su[(0, 1)].re, su[(0, 0)].im);
    let s = n.norm();
    if s < 1e-12 {
        return Ok(None);
    }
    let n = n / s;
    Ok(Some([n.x, n.y, n.z]))
}

impl Default for BlochVector {
    fn default() -> Self {
        Self { r: [0.0; 3] }
    }
}
