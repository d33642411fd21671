use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::PureState;
use crate::uur::principal_arg;

/// Overlap modulus below which the Bargmann phase is treated as undefined.
const ORTHOGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaCheck {
    /// Phase of `<psi1|psi2><psi2|psi3><psi3|psi1>`.
    pub phase: f64,
    /// Area of the spherical triangle spanned by the Bloch vectors.
    pub area: f64,
    /// `|area - 2|phase||`.
    pub defect: f64,
}

fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Area of the spherical triangle with unit-vector corners, by
/// l'Huilier's formula on the three side arcs.
pub fn spherical_triangle_area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let (a, b, c) = (Vector3::from(a), Vector3::from(b), Vector3::from(c));
    let x = angle_between(&b, &c);
    let y = angle_between(&a, &c);
    let z = angle_between(&a, &b);
    let s = 0.5 * (x + y + z);
    let prod =
        (0.5 * s).tan() * (0.5 * (s - x)).tan() * (0.5 * (s - y)).tan() * (0.5 * (s - z)).tan();
    4.0 * prod.max(0.0).sqrt().atan()
}

/// Compares the Bargmann phase of three pure qubit states with the area
/// of their Bloch triangle (`area = 2 |phase|`).
pub fn bargmann_area_check(
    psi1: &PureState,
    psi2: &PureState,
    psi3: &PureState,
) -> Result<AreaCheck> {
    let states = [psi1, psi2, psi3];
    for psi in states {
        if psi.dim() != 2 {
            return Err(Error::NotQubit { dim: psi.dim() });
        }
    }
    let mut product = crate::Complex64::new(1.0, 0.0);
    for j in 0..3 {
        let k = (j + 1) % 3;
        let ov = states[j].inner(states[k])?;
        if ov.norm() < ORTHOGONAL_TOL {
            let (lo, hi) = if j < k {
                (j + 1, k + 1)
            } else {
                (k + 1, j + 1)
            };
            return Err(Error::UndefinedPhase(lo, hi));
        }
        product *= ov;
    }
    let phase = principal_arg(product);
    let r: Vec<[f64; 3]> = states
        .iter()
        .map(|s| s.bloch_vector().map(|b| b.components()))
        .collect::<Result<_>>()?;
    let area = spherical_triangle_area(r[0], r[1], r[2]);
    Ok(AreaCheck {
        phase,
        area,
        defect: (area - 2.0 * phase.abs()).abs(),
    })
}
