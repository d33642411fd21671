use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bargmann::{bargmann_invariant, BargmannValue};
use super::{BARGMANN_CUTOFF, DET_SATURATION_TOL, RELATION_TOL};
use crate::error::Result;
use crate::qlinalg::matrix::ensure_dim;
use crate::qlinalg::{DensityMatrix, UnitaryOp};
use crate::report::{RelationReport, Sense};

/// `Var U = 1 - |<U>|^2`, clipped into `[0, 1]`.
pub fn variance_unitary(state: &DensityMatrix, u: &UnitaryOp) -> Result<f64> {
    let m = state.expectation(u.matrix())?;
    Ok((1.0 - m.norm_sqr()).clamp(0.0, 1.0))
}

fn mean(state: &DensityMatrix, u: &UnitaryOp) -> Result<Complex64> {
    state.expectation(u.matrix())
}

fn mean_adj_prod(state: &DensityMatrix, u: &UnitaryOp, v: &UnitaryOp) -> Result<Complex64> {
    state.expectation(&(u.matrix().adjoint() * v.matrix()))
}

/// `Var U Var V >= |<U^dag V> - <U^dag><V>|^2`.
pub fn uur_pair(state: &DensityMatrix, u: &UnitaryOp, v: &UnitaryOp) -> Result<RelationReport> {
    ensure_dim(state.dim(), u.dim())?;
    ensure_dim(state.dim(), v.dim())?;
    let mu = mean(state, u)?;
    let mv = mean(state, v)?;
    let uv = mean_adj_prod(state, u, v)?;
    let lhs = (1.0 - mu.norm_sqr()) * (1.0 - mv.norm_sqr());
    let rhs = (uv - mu.conj() * mv).norm_sqr();
    Ok(RelationReport::new(
        lhs,
        rhs,
        Sense::GreaterEq,
        RELATION_TOL,
    ))
}

/// Phase form of the two-unitary relation:
/// `cos Phi >= (|<U>|^2 + |<V>|^2 + |<U^dag V>|^2 - 1) / (2 |B|)`
/// with `B = <U><U^dag V><V^dag>`.
///
/// Indeterminate when `|B| < 1e-12`; [`uur_pair`] is then authoritative.
/// The slack equals `det G / (2|B|)`.
pub fn uur_bargmann_pair(
    state: &DensityMatrix,
    u: &UnitaryOp,
    v: &UnitaryOp,
) -> Result<RelationReport> {
    ensure_dim(state.dim(), u.dim())?;
    ensure_dim(state.dim(), v.dim())?;
    let b = bargmann_invariant(
        state,
        &[UnitaryOp::identity(state.dim()), u.clone(), v.clone()],
    )?;
    if b.modulus < BARGMANN_CUTOFF {
        return Ok(RelationReport::indeterminate(
            Sense::GreaterEq,
            DET_SATURATION_TOL,
        ));
    }
    let mu = mean(state, u)?;
    let mv = mean(state, v)?;
    let uv = mean_adj_prod(state, u, v)?;
    let lhs = b.phase.cos();
    let rhs = (mu.norm_sqr() + mv.norm_sqr() + uv.norm_sqr() - 1.0) / (2.0 * b.modulus);
    Ok(RelationReport::new(
        lhs,
        rhs,
        Sense::GreaterEq,
        DET_SATURATION_TOL,
    ))
}

/// Three-unitary relation written through Bargmann invariants of
/// `[I, U, V, W]` (labelled 1..4):
///
/// `Var U Var(V^dag W) + Var V Var(U^dag W) + Var W Var(U^dag V)
///   >= 2 - 2 Re(B123 + B124 + B134 + B234) + 2 Re(B1234 + B1243 + B1324)`.
///
/// `lhs - rhs` is exactly `det G` for the 4x4 Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargmannN3 {
    pub relation: RelationReport,
    pub triples: [BargmannValue; 4],
    pub quadruples: [BargmannValue; 3],
}

pub fn uur_bargmann_n3(
    state: &DensityMatrix,
    u: &UnitaryOp,
    v: &UnitaryOp,
    w: &UnitaryOp,
) -> Result<BargmannN3> {
    for op in [u, v, w] {
        ensure_dim(state.dim(), op.dim())?;
    }
    let ops = [
        UnitaryOp::identity(state.dim()),
        u.clone(),
        v.clone(),
        w.clone(),
    ];
    let cyc = |idx: &[usize]| -> Result<BargmannValue> {
        let list: Vec<UnitaryOp> = idx.iter().map(|&j| ops[j].clone()).collect();
        bargmann_invariant(state, &list)
    };
    let triples = [
        cyc(&[0, 1, 2])?,
        cyc(&[0, 1, 3])?,
        cyc(&[0, 2, 3])?,
        cyc(&[1, 2, 3])?,
    ];
    let quadruples = [
        cyc(&[0, 1, 2, 3])?,
        cyc(&[0, 1, 3, 2])?,
        cyc(&[0, 2, 1, 3])?,
    ];

    let var_pair = |a: &UnitaryOp, b: &UnitaryOp| -> Result<f64> {
        Ok((1.0 - mean_adj_prod(state, a, b)?.norm_sqr()).clamp(0.0, 1.0))
    };
    let lhs = variance_unitary(state, u)? * var_pair(v, w)?
        + variance_unitary(state, v)? * var_pair(u, w)?
        + variance_unitary(state, w)? * var_pair(u, v)?;
    let rhs = 2.0 - 2.0 * triples.iter().map(|b| b.value.re).sum::<f64>()
        + 2.0 * quadruples.iter().map(|b| b.value.re).sum::<f64>();
    Ok(BargmannN3 {
        relation: RelationReport::new(lhs, rhs, Sense::GreaterEq, DET_SATURATION_TOL),
        triples,
        quadruples,
    })
}
