use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::OUR_TOL;
use crate::error::{Error, Result};
use crate::qlinalg::PureState;
use crate::report::{RelationReport, Sense};

/// Accepted excursion of a transition probability outside `[0, 1]`
/// before it is rejected rather than clipped.
const UNIT_SLOP: f64 = 1e-12;

/// `|<psi1|psi2>|^2`.
pub fn transition_probability(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    Ok(psi1.inner(psi2)?.norm_sqr().clamp(0.0, 1.0))
}

/// Fubini–Study angle `arccos |<a|b>|` in `[0, pi/2]`, computed as
/// `atan2(|b - a<a|b>|, |<a|b>|)` to stay accurate near both ends.
pub fn fubini_study_angle(a: &PureState, b: &PureState) -> Result<f64> {
    let ov = a.inner(b)?;
    let perp = b.amplitudes() - a.amplitudes() * ov;
    Ok(perp.norm().atan2(ov.norm()))
}

fn theta_from_t(t: f64) -> f64 {
    t.clamp(0.0, 1.0).sqrt().acos().clamp(0.0, FRAC_PI_2)
}

/// Pairwise transition probabilities of three pure states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapTriple {
    pub t12: f64,
    pub t13: f64,
    pub t23: f64,
}

impl OverlapTriple {
    /// Rejects values outside `[0, 1]` (beyond roundoff).
    pub fn new(t12: f64, t13: f64, t23: f64) -> Result<Self> {
        for (what, v) in [("T12", t12), ("T13", t13), ("T23", t23)] {
            if !v.is_finite() || !(-UNIT_SLOP..=1.0 + UNIT_SLOP).contains(&v) {
                return Err(Error::OutOfUnitInterval { what, value: v });
            }
        }
        Ok(Self::clamped(t12, t13, t23))
    }

    /// Clips each value into `[0, 1]`; for estimates that may overshoot.
    pub fn clamped(t12: f64, t13: f64, t23: f64) -> Self {
        Self {
            t12: t12.clamp(0.0, 1.0),
            t13: t13.clamp(0.0, 1.0),
            t23: t23.clamp(0.0, 1.0),
        }
    }

    pub fn from_states(psi1: &PureState, psi2: &PureState, psi3: &PureState) -> Result<Self> {
        Ok(Self {
            t12: transition_probability(psi1, psi2)?,
            t13: transition_probability(psi1, psi3)?,
            t23: transition_probability(psi2, psi3)?,
        })
    }

    /// `(theta12, theta13, theta23)` with `theta = arccos sqrt(T)`.
    pub fn thetas(&self) -> [f64; 3] {
        [
            theta_from_t(self.t12),
            theta_from_t(self.t13),
            theta_from_t(self.t23),
        ]
    }
}

/// Three-state overlap relation `T12 + T13 + T23 - 2 sqrt(T12 T13 T23) <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OurReport {
    pub relation: RelationReport,
    /// No three pure states realise the triple.
    pub infeasible: bool,
}

pub fn our_evaluate(triple: &OverlapTriple) -> OurReport {
    let OverlapTriple { t12, t13, t23 } = *triple;
    let lhs = t12 + t13 + t23 - 2.0 * (t12 * t13 * t23).sqrt();
    let relation = RelationReport::new(lhs, 1.0, Sense::LessEq, OUR_TOL);
    OurReport {
        infeasible: relation.violated(),
        relation,
    }
}

/// Trace-distance triangle inequalities for a triple, all three
/// permutations, alongside the overlap relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceTriangleReport {
    /// `D23 <= D12 + D13`, `D13 <= D12 + D23`, `D12 <= D13 + D23` with
    /// `D = sqrt(1 - T)`.
    pub permutations: [RelationReport; 3],
    pub our: OurReport,
    /// Passes every trace-distance inequality yet violates the overlap relation.
    pub weaker_witness: bool,
}

impl TraceTriangleReport {
    pub fn all_hold(&self) -> bool {
        self.permutations.iter().all(RelationReport::holds)
    }
}

pub fn trace_triangle_evaluate(triple: &OverlapTriple) -> TraceTriangleReport {
    let d = |t: f64| (1.0 - t).max(0.0).sqrt();
    let (d12, d13, d23) = (d(triple.t12), d(triple.t13), d(triple.t23));
    let permutations = [
        RelationReport::new(d23, d12 + d13, Sense::LessEq, OUR_TOL),
        RelationReport::new(d13, d12 + d23, Sense::LessEq, OUR_TOL),
        RelationReport::new(d12, d13 + d23, Sense::LessEq, OUR_TOL),
    ];
    let our = our_evaluate(triple);
    let weaker_witness = permutations.iter().all(RelationReport::holds) && our.infeasible;
    TraceTriangleReport {
        permutations,
        our,
        weaker_witness,
    }
}

/// Which additive identity between the three angles is closest to holding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicBranch {
    /// `theta23 = theta12 + theta13`: state 1 lies between 2 and 3.
    Theta23Sum,
    /// `theta12 = theta13 + theta23`: state 3 lies between 1 and 2.
    Theta12Sum,
    /// `theta13 = theta12 + theta23`: state 2 lies between 1 and 3.
    Theta13Sum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCheck {
    pub theta12: f64,
    pub theta13: f64,
    pub theta23: f64,
    pub branch: GeodesicBranch,
    /// Absolute defects of the three identities, in [`GeodesicBranch`] order.
    pub defects: [f64; 3],
    /// Smallest defect.
    pub residual: f64,
    pub in_polytope: bool,
}

/// Whether `(theta12, theta23, theta13)` lies in the polytope with
/// vertices `(0,0,0)`, `(0,pi/2,pi/2)`, `(pi/2,0,pi/2)`, `(pi/2,pi/2,0)`
/// and `(pi/2,pi/2,pi/2)`: the cube `[0, pi/2]^3` cut by the three
/// triangle inequalities.
pub fn in_polytope(theta12: f64, theta23: f64, theta13: f64, tol: f64) -> bool {
    let t = [theta12, theta23, theta13];
    t.iter().all(|&x| x >= -tol && x <= FRAC_PI_2 + tol)
        && t[0] <= t[1] + t[2] + tol
        && t[1] <= t[0] + t[2] + tol
        && t[2] <= t[0] + t[1] + tol
}

pub fn geodesic_check(
    psi1: &PureState,
    psi2: &PureState,
    psi3: &PureState,
) -> Result<GeodesicCheck> {
    let theta12 = fubini_study_angle(psi1, psi2)?;
    let theta13 = fubini_study_angle(psi1, psi3)?;
    let theta23 = fubini_study_angle(psi2, psi3)?;
    let defects = [
        (theta23 - theta12 - theta13).abs(),
        (theta12 - theta13 - theta23).abs(),
        (theta13 - theta12 - theta23).abs(),
    ];
    let (k, residual) = defects
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("three defects");
    let branch = [
        GeodesicBranch::Theta23Sum,
        GeodesicBranch::Theta12Sum,
        GeodesicBranch::Theta13Sum,
    ][k];
    Ok(GeodesicCheck {
        theta12,
        theta13,
        theta23,
        branch,
        defects,
        residual,
        in_polytope: in_polytope(theta12, theta23, theta13, 1e-9),
    })
}

/// Four-state overlap relation
///
/// ```text
/// 1 <= (1/2)[(1-T12)(1-T34) + (1-T13)(1-T24) + (1-T14)(1-T23)]
///      + sqrt(T12 T23 T13) + sqrt(T12 T24 T14) + sqrt(T13 T34 T14) + sqrt(T23 T34 T24)
///      + sqrt(T12 T23 T34 T14) + sqrt(T12 T13 T24 T34) + sqrt(T13 T14 T23 T24)
/// ```
///
/// reported with `lhs` the bracketed sum and `rhs = 1`. With `T_j4 = 0`
/// the slack is half that of [`our_evaluate`] on the first three states.
pub fn our4_evaluate(psi: [&PureState; 4]) -> Result<RelationReport> {
    let mut t = [[1.0; 4]; 4];
    for j in 0..4 {
        for k in (j + 1)..4 {
            let v = transition_probability(psi[j], psi[k])?;
            t[j][k] = v;
            t[k][j] = v;
        }
    }
    let (t12, t13, t14, t23, t24, t34) = (t[0][1], t[0][2], t[0][3], t[1][2], t[1][3], t[2][3]);
    let pairs =
        0.5 * ((1.0 - t12) * (1.0 - t34) + (1.0 - t13) * (1.0 - t24) + (1.0 - t14) * (1.0 - t23));
    let triples = (t12 * t23 * t13).sqrt()
        + (t12 * t24 * t14).sqrt()
        + (t13 * t34 * t14).sqrt()
        + (t23 * t34 * t24).sqrt();
    let quads = (t12 * t23 * t34 * t14).sqrt()
        + (t12 * t13 * t24 * t34).sqrt()
        + (t13 * t14 * t23 * t24).sqrt();
    Ok(RelationReport::new(
        pairs + triples + quads,
        1.0,
        Sense::GreaterEq,
        OUR_TOL,
    ))
}
