//! Minimum-uncertainty map of the Bloch sphere for two qubit rotations.

use serde::Serialize;
use uurlab_core::overlap::{mus_scan, Branch, MusSolutionSet, FAMILY_TOL};
use uurlab_core::qlinalg::rotation_unitary;
use uurlab_core::UnitaryOp;

use crate::config::{ExperimentSpec, MusmapParams};
use crate::error::Result;
use crate::report::{Check, ReportBundle, Table};

pub fn unitaries(p: &MusmapParams) -> Result<(UnitaryOp, UnitaryOp)> {
    Ok((
        rotation_unitary(p.u_axis, p.u_angle_deg.to_radians())?,
        rotation_unitary(p.v_axis, p.v_angle_deg.to_radians())?,
    ))
}

pub fn scan(p: &MusmapParams) -> Result<MusSolutionSet> {
    let (u, v) = unitaries(p)?;
    Ok(mus_scan(&u, &v, p.resolution)?)
}

#[derive(Debug, Serialize)]
struct FamilyRow {
    family: usize,
    branch: Branch,
    x: f64,
    y: f64,
    z: f64,
}

pub fn checks(set: &MusSolutionSet) -> Vec<Check> {
    if set.degenerate {
        return vec![Check::new(
            "musmap.families",
            true,
            "degenerate: every state saturates the overlap relation",
        )];
    }
    let worst = set
        .families
        .iter()
        .map(|f| f.max_residual)
        .fold(0.0, f64::max);
    let recovered = set.known_axis_hits.iter().filter(|h| h.recovered).count();
    vec![
        Check::new(
            "musmap.families",
            !set.families.is_empty() && worst <= FAMILY_TOL,
            format!(
                "{} families, max residual {worst:.3e} (tolerance {FAMILY_TOL:e})",
                set.families.len()
            ),
        ),
        Check::new(
            "musmap.axes-recovered",
            set.all_axes_recovered(),
            format!(
                "{recovered} of {} rotation-axis states on a family",
                set.known_axis_hits.len()
            ),
        ),
    ]
}

pub fn run(spec: &ExperimentSpec, p: &MusmapParams) -> Result<ReportBundle> {
    let set = scan(p)?;
    let mut bundle = ReportBundle::new(spec);
    let mut surface = Vec::new();
    set.write_surface_csv(&mut surface)?;
    bundle.table(Table {
        name: "musmap_surface.csv".to_string(),
        contents: String::from_utf8(surface).expect("CSV output is UTF-8"),
    });
    let rows = set.families.iter().enumerate().flat_map(|(k, f)| {
        f.points.iter().map(move |b| FamilyRow {
            family: k,
            branch: f.branch,
            x: b[0],
            y: b[1],
            z: b[2],
        })
    });
    bundle.table(Table::from_rows(
        "musmap_families.csv",
        &["family", "branch", "x", "y", "z"],
        rows,
    )?);
    bundle.report("degenerate", &set.degenerate)?;
    bundle.report("family_count", &set.families.len())?;
    bundle.report(
        "family_arcs",
        &set.families.iter().map(|f| f.arcs).collect::<Vec<_>>(),
    )?;
    bundle.report("axis_hits", &set.known_axis_hits)?;
    for c in checks(&set) {
        bundle.check(c);
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_pair_has_two_families() {
        let set = scan(&MusmapParams::default()).unwrap();
        assert!(!set.degenerate);
        assert_eq!(set.families.len(), 2);
        assert!(checks(&set).iter().all(|c| c.passed));
    }

    #[test]
    fn equal_rotations_are_degenerate() {
        let p = MusmapParams {
            v_axis: [0.0, 1.0, 0.0],
            ..MusmapParams::default()
        };
        assert!(scan(&p).unwrap().degenerate);
    }
}
