//! Out-of-time-order correlator bounds along a random Heisenberg evolution.

use serde::Serialize;
use uurlab_core::otoc::{heisenberg_evolve, otoc_bounds, OtocReport};
use uurlab_core::qlinalg::random::{random_density_matrix, random_hermitian, random_pure_state};
use uurlab_core::qlinalg::{haar_unitary, seeded_rng};

use crate::config::{ExperimentSpec, OtocParams};
use crate::error::Result;
use crate::report::{Check, ReportBundle, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OtocRow {
    pub t: f64,
    pub re_f: f64,
    pub im_f: f64,
    pub abs_f: f64,
    pub modulus_bound: f64,
    pub commutator_lhs: f64,
    pub commutator_rhs: f64,
}

pub fn times(p: &OtocParams) -> Vec<f64> {
    let n = p.t_points;
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|k| p.t_max * k as f64 / (n - 1) as f64)
        .collect()
}

/// Evaluates the bounds at every time for one seeded draw.
pub fn simulate(p: &OtocParams, seed: u64) -> Result<Vec<(f64, OtocReport)>> {
    let mut rng = seeded_rng(seed);
    let rho = if p.pure_state {
        random_pure_state(p.dim, &mut rng).density()
    } else {
        random_density_matrix(p.dim, &mut rng)
    };
    let v = haar_unitary(p.dim, &mut rng);
    let w = haar_unitary(p.dim, &mut rng);
    let h = random_hermitian(p.dim, &mut rng);
    times(p)
        .into_iter()
        .map(|t| Ok((t, otoc_bounds(&rho, &v, &heisenberg_evolve(&w, &h, t)?)?)))
        .collect()
}

pub fn checks(reports: &[(f64, OtocReport)]) -> Vec<Check> {
    let upper = reports.iter().filter(|(_, r)| r.upper.holds()).count();
    let lower = reports.iter().filter(|(_, r)| r.lower.holds()).count();
    let n = reports.len();
    vec![
        Check::new(
            "otoc.modulus-bound",
            upper == n,
            format!("|F| <= cos(theta_vw - theta_wv) at {upper} of {n} times"),
        ),
        Check::new(
            "otoc.commutator-bound",
            lower == n,
            format!("commutator bound holds at {lower} of {n} times"),
        ),
    ]
}

pub fn run(spec: &ExperimentSpec, p: &OtocParams) -> Result<ReportBundle> {
    let reports = simulate(p, spec.seed)?;
    let rows = reports.iter().map(|(t, r)| OtocRow {
        t: *t,
        re_f: r.f.re,
        im_f: r.f.im,
        abs_f: r.f.norm(),
        modulus_bound: r.modulus_bound,
        commutator_lhs: r.commutator_lhs,
        commutator_rhs: r.commutator_rhs,
    });
    let mut bundle = ReportBundle::new(spec);
    bundle.table(Table::from_rows(
        "otoc.csv",
        &[
            "t",
            "re_f",
            "im_f",
            "abs_f",
            "modulus_bound",
            "commutator_lhs",
            "commutator_rhs",
        ],
        rows,
    )?);
    bundle.report(
        "min_upper_slack",
        &reports
            .iter()
            .map(|(_, r)| r.upper.slack)
            .fold(f64::INFINITY, f64::min),
    )?;
    bundle.report(
        "min_lower_slack",
        &reports
            .iter()
            .map(|(_, r)| r.lower.slack)
            .fold(f64::INFINITY, f64::min),
    )?;
    for c in checks(&reports) {
        bundle.check(c);
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_grid_spans_range() {
        let t = times(&OtocParams::default());
        assert_eq!(t.len(), 31);
        assert_eq!(t[0], 0.0);
        assert!((t[30] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_hold_for_default_draws() {
        for seed in 0..5 {
            let r = simulate(
                &OtocParams {
                    dim: 3,
                    ..OtocParams::default()
                },
                seed,
            )
            .unwrap();
            assert!(checks(&r).iter().all(|c| c.passed));
        }
    }
}
