use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::triple::{fubini_study_angle, our_evaluate, OverlapTriple};
use super::FAMILY_TOL;
use crate::error::{Error, Result};
use crate::qlinalg::matrix::ensure_dim;
use crate::qlinalg::{bloch_rotation_matrix, rotation_axis, PureState, UnitaryOp};

/// Coarse-grid residual below which the surface is considered flat zero.
const DEGENERATE_TOL: f64 = 1e-9;
/// Residual allowed at the rotation-axis states.
const AXIS_TOL: f64 = 1e-6;

fn branch_defects(u: &UnitaryOp, v: &UnitaryOp, psi: &PureState) -> Result<(f64, f64)> {
    ensure_dim(psi.dim(), u.dim())?;
    ensure_dim(psi.dim(), v.dim())?;
    let up = psi.apply(u)?;
    let vp = psi.apply(v)?;
    let th_u = fubini_study_angle(psi, &up)?;
    let th_v = fubini_study_angle(psi, &vp)?;
    let th_uv = fubini_study_angle(&up, &vp)?;
    Ok((
        (th_uv - (th_u + th_v)).abs(),
        (th_uv - (th_u - th_v).abs()).abs(),
    ))
}

/// Distance from the minimum-uncertainty condition
/// `theta(U psi, V psi) = |theta(psi, U psi) +- theta(psi, V psi)|`,
/// minimised over the sign. Zero exactly when `psi`, `U psi`, `V psi`
/// lie on a common geodesic.
pub fn mus_residual(u: &UnitaryOp, v: &UnitaryOp, psi: &PureState) -> Result<f64> {
    let (plus, minus) = branch_defects(u, v, psi)?;
    Ok(plus.min(minus))
}

/// Sign in the minimum-uncertainty condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusGridPoint {
    /// Polar angle of the Bloch vector.
    pub theta: f64,
    /// Azimuth of the Bloch vector.
    pub phi: f64,
    /// Three-state overlap left-hand side for `(psi, U psi, V psi)`.
    pub our_lhs: f64,
    pub residual: f64,
}

/// One sign branch of minimum-uncertainty states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MusFamily {
    pub branch: Branch,
    /// Refined Bloch vectors, each with residual at most `FAMILY_TOL`.
    pub points: Vec<[f64; 3]>,
    /// Number of connected arcs the points form.
    pub arcs: usize,
    pub max_residual: f64,
}

impl MusFamily {
    /// Smallest angular distance from `axis` to a member point.
    pub fn distance_to(&self, axis: [f64; 3]) -> f64 {
        let a = Vector3::from(axis);
        self.points
            .iter()
            .map(|p| Vector3::from(*p).angle(&a))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Check of a rotation-axis state `+-m` or `+-n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisHit {
    pub axis: [f64; 3],
    pub residual: f64,
    /// Residual within tolerance and some family point close by.
    pub recovered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MusSolutionSet {
    pub resolution: usize,
    /// Row-major over `theta` then `phi`.
    pub grid: Vec<MusGridPoint>,
    /// Whole sphere saturates (e.g. `U` equal to `V` up to phase).
    pub degenerate: bool,
    pub families: Vec<MusFamily>,
    /// `+m, -m, +n, -n` for rotation axes `m` of `U` and `n` of `V`;
    /// identity-like unitaries contribute nothing.
    pub known_axis_hits: Vec<AxisHit>,
}

impl MusSolutionSet {
    /// Writes `theta,phi,our_lhs,residual` rows.
    pub fn write_surface_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "phi", "our_lhs", "residual"])?;
        for p in &self.grid {
            w.serialize((p.theta, p.phi, p.our_lhs, p.residual))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn all_axes_recovered(&self) -> bool {
        self.known_axis_hits.iter().all(|h| h.recovered)
    }
}

fn spherical(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

fn state_at(a: &Vector3<f64>) -> PureState {
    PureState::from_bloch([a.x, a.y, a.z]).expect("unit Bloch vector")
}

/// Signed volume `a . (R_U a x R_V a)`; vanishes when the three Bloch
/// vectors share a great circle.
fn coplanarity(ru: &Matrix3<f64>, rv: &Matrix3<f64>, a: &Vector3<f64>) -> f64 {
    a.dot(&(ru * a).cross(&(rv * a)))
}

fn slerp_edge(p: &Vector3<f64>, q: &Vector3<f64>, t: f64) -> Vector3<f64> {
    (p * (1.0 - t) + q * t).normalize()
}

/// Bisects the coplanarity function on the chord `p -> q`.
fn bisect_edge(
    ru: &Matrix3<f64>,
    rv: &Matrix3<f64>,
    p: &Vector3<f64>,
    q: &Vector3<f64>,
) -> Vector3<f64> {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let g_lo = coplanarity(ru, rv, p);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let g = coplanarity(ru, rv, &slerp_edge(p, q, mid));
        if g == 0.0 {
            return slerp_edge(p, q, mid);
        }
        if (g > 0.0) == (g_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    slerp_edge(p, q, 0.5 * (lo + hi))
}

/// Drops candidates that repeat an earlier point, as happens for a grid
/// node shared by several straddling edges.
fn dedup_points(candidates: Vec<(Branch, [f64; 3], f64)>) -> Vec<(Branch, [f64; 3], f64)> {
    let mut kept: Vec<(Branch, [f64; 3], f64)> = Vec::with_capacity(candidates.len());
    for c in candidates {
        let seen = kept
            .iter()
            .any(|k| (0..3).all(|i| (k.1[i] - c.1[i]).abs() <= 1e-12));
        if !seen {
            kept.push(c);
        }
    }
    kept
}

/// Single-linkage components of `points` under the angular threshold.
fn count_components(points: &[[f64; 3]], link: f64) -> usize {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let vs: Vec<Vector3<f64>> = points.iter().map(|p| Vector3::from(*p)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if vs[i].angle(&vs[j]) <= link {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Scans the Bloch sphere of a qubit for minimum-uncertainty states of
/// the pair `(U, V)`.
///
/// The grid has `resolution` polar rows (poles included) and
/// `2 * resolution` azimuth columns. Candidate points are located by
/// bisecting the great-circle condition along every grid edge whose
/// endpoints straddle it, then kept when their residual is at most
/// `FAMILY_TOL`; each survivor is assigned to the sign branch with the
/// smaller defect.
pub fn mus_scan(u: &UnitaryOp, v: &UnitaryOp, resolution: usize) -> Result<MusSolutionSet> {
    for op in [u, v] {
        if op.dim() != 2 {
            return Err(Error::NotQubit { dim: op.dim() });
        }
    }
    if resolution < 32 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 32, got {resolution}"
        )));
    }
    let n_theta = resolution;
    let n_phi = 2 * resolution;
    let node = |i: usize, j: usize| -> (f64, f64) {
        (
            PI * i as f64 / (n_theta - 1) as f64,
            2.0 * PI * j as f64 / n_phi as f64,
        )
    };

    let grid: Vec<MusGridPoint> = (0..n_theta * n_phi)
        .into_par_iter()
        .map(|idx| -> Result<MusGridPoint> {
            let (theta, phi) = node(idx / n_phi, idx % n_phi);
            let psi = state_at(&spherical(theta, phi));
            let triple = OverlapTriple::from_states(&psi, &psi.apply(u)?, &psi.apply(v)?)?;
            Ok(MusGridPoint {
                theta,
                phi,
                our_lhs: our_evaluate(&triple).relation.lhs,
                residual: mus_residual(u, v, &psi)?,
            })
        })
        .collect::<Result<_>>()?;

    let degenerate = grid.iter().all(|p| p.residual <= DEGENERATE_TOL);

    let axes: Vec<[f64; 3]> = [rotation_axis(u)?, rotation_axis(v)?]
        .into_iter()
        .flatten()
        .flat_map(|m| [m, [-m[0], -m[1], -m[2]]])
        .collect();

    if degenerate {
        let known_axis_hits = axes
            .iter()
            .map(|&axis| -> Result<AxisHit> {
                let residual = mus_residual(u, v, &state_at(&Vector3::from(axis)))?;
                Ok(AxisHit {
                    axis,
                    residual,
                    recovered: residual <= AXIS_TOL,
                })
            })
            .collect::<Result<_>>()?;
        return Ok(MusSolutionSet {
            resolution,
            grid,
            degenerate,
            families: Vec::new(),
            known_axis_hits,
        });
    }

    let ru = bloch_rotation_matrix(u)?;
    let rv = bloch_rotation_matrix(v)?;
    let vec_at = |i: usize, j: usize| {
        let (t, p) = node(i, j);
        spherical(t, p)
    };

    // Interior polar rows only: the pole rows collapse to single points.
    let mut edges: Vec<(Vector3<f64>, Vector3<f64>)> = Vec::new();
    for i in 0..n_theta {
        for j in 0..n_phi {
            let p = vec_at(i, j);
            if i > 0 && i + 1 < n_theta {
                edges.push((p, vec_at(i, (j + 1) % n_phi)));
            }
            if i + 1 < n_theta {
                edges.push((p, vec_at(i + 1, j)));
            }
        }
    }

    let candidates: Vec<(Branch, [f64; 3], f64)> = edges
        .par_iter()
        .filter_map(|(p, q)| {
            let gp = coplanarity(&ru, &rv, p);
            let gq = coplanarity(&ru, &rv, q);
            if gp == 0.0 || gq == 0.0 || (gp > 0.0) != (gq > 0.0) {
                let a = if gp == 0.0 {
                    *p
                } else if gq == 0.0 {
                    *q
                } else {
                    bisect_edge(&ru, &rv, p, q)
                };
                let psi = state_at(&a);
                let (plus, minus) = branch_defects(u, v, &psi).ok()?;
                let residual = plus.min(minus);
                if residual <= FAMILY_TOL {
                    let branch = if plus <= minus {
                        Branch::Plus
                    } else {
                        Branch::Minus
                    };
                    return Some((branch, [a.x, a.y, a.z], residual));
                }
            }
            None
        })
        .collect();
    let candidates = dedup_points(candidates);

    let link = 3.0 * PI / (n_theta - 1) as f64;
    let mut families = Vec::new();
    for branch in [Branch::Plus, Branch::Minus] {
        let members: Vec<&(Branch, [f64; 3], f64)> =
            candidates.iter().filter(|c| c.0 == branch).collect();
        if members.is_empty() {
            continue;
        }
        let points: Vec<[f64; 3]> = members.iter().map(|c| c.1).collect();
        families.push(MusFamily {
            branch,
            arcs: count_components(&points, link),
            max_residual: members.iter().map(|c| c.2).fold(0.0, f64::max),
            points,
        });
    }

    let known_axis_hits = axes
        .iter()
        .map(|&axis| -> Result<AxisHit> {
            let residual = mus_residual(u, v, &state_at(&Vector3::from(axis)))?;
            let near = families.iter().any(|f| f.distance_to(axis) <= link);
            Ok(AxisHit {
                axis,
                residual,
                recovered: residual <= AXIS_TOL && near,
            })
        })
        .collect::<Result<_>>()?;

    Ok(MusSolutionSet {
        resolution,
        grid,
        degenerate,
        families,
        known_axis_hits,
    })
}
