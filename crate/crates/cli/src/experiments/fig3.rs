//! Equilateral-triangle sweep: the two-unitary Bargmann relation on `|H>`.

use rayon::prelude::*;
use serde::Serialize;
use uurlab_core::interferometer::{
    fit_fringe, relation_from_fits, simulate_scan_set, ArmSetting, FringeFit, InterferometerConfig,
    RelationKind,
};
use uurlab_core::qlinalg::rotation_between;
use uurlab_core::uur::uur_bargmann_pair;
use uurlab_core::{DensityMatrix, PureState, RelationReport, UnitaryOp};

use super::interferometer_config;
use crate::config::{ExperimentSpec, Fig3Params};
use crate::error::Result;
use crate::report::{Check, ReportBundle, Table};

/// Bloch direction of `|H>`.
const VERTEX: [f64; 3] = [0.0, 0.0, 1.0];

/// Rotations carrying `|H>` to the other two corners of an equilateral
/// Bloch triangle with side `s` (radians), placed symmetrically about the
/// `x`-`z` meridian.
pub fn equilateral_unitaries(s: f64) -> Result<(UnitaryOp, UnitaryOp)> {
    let cos_delta = (s.cos() / (1.0 + s.cos())).clamp(-1.0, 1.0);
    let half = 0.5 * cos_delta.acos();
    let corner = |phi: f64| [s.sin() * phi.cos(), s.sin() * phi.sin(), s.cos()];
    Ok((
        rotation_between(VERTEX, corner(half))?,
        rotation_between(VERTEX, corner(-half))?,
    ))
}

/// `cos Phi` on the pure-state saturation curve when all three transition
/// probabilities equal `t`.
pub fn saturation_curve(t: f64) -> f64 {
    (3.0 * t - 1.0) / (2.0 * t.powf(1.5))
}

/// Side lengths in degrees, `s_max k / points` for `k = 1..=points`.
pub fn side_lengths(p: &Fig3Params) -> Vec<f64> {
    (1..=p.points)
        .map(|k| p.s_max_deg * k as f64 / p.points as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig3Row {
    pub s_deg: f64,
    /// Mean of `|<U>|^2`, `|<V>|^2`, `|<U^dag V>|^2`.
    pub t_mean: f64,
    pub theory: f64,
    pub algebra_lhs: f64,
    pub algebra_rhs: f64,
    pub noiseless_lhs: f64,
    pub noiseless_rhs: f64,
    pub noisy_t: f64,
    pub noisy_lhs: f64,
    pub noisy_lhs_se: f64,
    pub noisy_rhs: f64,
    pub noisy_rhs_se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Outcome {
    pub rows: Vec<Fig3Row>,
    pub noiseless: Vec<RelationReport>,
    /// `noisy[trial][point]`.
    pub noisy: Vec<Vec<RelationReport>>,
    /// Points whose noisy sides both lie within 3 standard errors of the
    /// algebraic values, per trial.
    pub within: Vec<usize>,
    pub algebra: Vec<RelationReport>,
}

impl Fig3Outcome {
    /// Largest `|lhs - rhs|` of the noiseless reconstruction.
    pub fn noiseless_gap(&self) -> f64 {
        self.noiseless
            .iter()
            .map(|r| (r.lhs - r.rhs).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the noiseless reconstruction from the algebra.
    pub fn noiseless_vs_algebra(&self) -> f64 {
        self.noiseless
            .iter()
            .zip(&self.algebra)
            .map(|(n, a)| (n.lhs - a.lhs).abs().max((n.rhs - a.rhs).abs()))
            .fold(0.0, f64::max)
    }

    pub fn median_within(&self) -> f64 {
        median(&self.within)
    }

    /// `ceil(12 n / 13)` points out of `n`.
    pub fn required_within(&self) -> usize {
        (12 * self.rows.len()).div_ceil(13)
    }
}

fn median(values: &[usize]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2]) as f64
    }
}

fn within_3se(r: &RelationReport, truth: &RelationReport) -> bool {
    if r.indeterminate {
        return false;
    }
    let (ls, rs) = (r.lhs_se.unwrap_or(0.0), r.rhs_se.unwrap_or(0.0));
    (r.lhs - truth.lhs).abs() <= 3.0 * ls && (r.rhs - truth.rhs).abs() <= 3.0 * rs
}

struct Measured {
    report: RelationReport,
    t_mean: f64,
}

fn measure(
    cfg: &InterferometerConfig,
    rho: &DensityMatrix,
    u: &UnitaryOp,
    v: &UnitaryOp,
    base: u64,
) -> Result<Measured> {
    let set = simulate_scan_set(
        cfg,
        rho,
        &ArmSetting::fixed("U", u.clone()),
        &ArmSetting::fixed("V", v.clone()),
        base,
    )?;
    let fits: Vec<FringeFit> = set
        .scans()
        .map(fit_fringe)
        .collect::<uurlab_core::Result<_>>()?;
    let t_mean = fits[..3]
        .iter()
        .map(|f| f.visibility * f.visibility)
        .sum::<f64>()
        / 3.0;
    Ok(Measured {
        report: relation_from_fits(RelationKind::UurBargmann, &fits, false)?,
        t_mean,
    })
}

pub fn simulate(p: &Fig3Params, seed: u64) -> Result<Fig3Outcome> {
    let h = PureState::basis(2, 0)?.density();
    let sides = side_lengths(p);
    let ops: Vec<(UnitaryOp, UnitaryOp)> = sides
        .iter()
        .map(|s| equilateral_unitaries(s.to_radians()))
        .collect::<Result<_>>()?;

    let quiet = interferometer_config(
        p.counts_scale,
        p.phase_points,
        p.input_purity,
        0.0,
        p.phase_offset_deg,
        seed,
        false,
    );
    let noisy_cfg = InterferometerConfig {
        noise: true,
        ..quiet.clone()
    };
    let rho = uurlab_core::interferometer::prepared_state(&quiet, &h)?;

    let algebra: Vec<RelationReport> = ops
        .iter()
        .map(|(u, v)| Ok(uur_bargmann_pair(&rho, u, v)?))
        .collect::<Result<_>>()?;
    let noiseless: Vec<Measured> = ops
        .par_iter()
        .map(|(u, v)| measure(&quiet, &h, u, v, 0))
        .collect::<Result<_>>()?;

    let n = ops.len();
    let jobs: Vec<(usize, usize)> = (0..p.trials)
        .flat_map(|t| (0..n).map(move |k| (t, k)))
        .collect();
    let flat: Vec<Measured> = jobs
        .par_iter()
        .map(|&(t, k)| {
            let (u, v) = &ops[k];
            measure(&noisy_cfg, &h, u, v, 4 * (t * n + k) as u64)
        })
        .collect::<Result<_>>()?;
    let mut noisy_t = vec![0.0; n];
    let mut noisy: Vec<Vec<RelationReport>> = Vec::with_capacity(p.trials);
    for (t, chunk) in flat.chunks(n).enumerate() {
        if t == 0 {
            for (k, m) in chunk.iter().enumerate() {
                noisy_t[k] = m.t_mean;
            }
        }
        noisy.push(chunk.iter().map(|m| m.report.clone()).collect());
    }
    let within = noisy
        .iter()
        .map(|trial| {
            trial
                .iter()
                .zip(&algebra)
                .filter(|(r, a)| within_3se(r, a))
                .count()
        })
        .collect();

    let rows = (0..n)
        .map(|k| {
            let (u, v) = &ops[k];
            let t_mean = [
                rho.expectation(u.matrix())?.norm_sqr(),
                rho.expectation(v.matrix())?.norm_sqr(),
                rho.expectation(&(u.matrix().adjoint() * v.matrix()))?
                    .norm_sqr(),
            ]
            .iter()
            .sum::<f64>()
                / 3.0;
            let first = &noisy[0][k];
            Ok(Fig3Row {
                s_deg: sides[k],
                t_mean,
                theory: saturation_curve(t_mean),
                algebra_lhs: algebra[k].lhs,
                algebra_rhs: algebra[k].rhs,
                noiseless_lhs: noiseless[k].report.lhs,
                noiseless_rhs: noiseless[k].report.rhs,
                noisy_t: noisy_t[k],
                noisy_lhs: first.lhs,
                noisy_lhs_se: first.lhs_se.unwrap_or(f64::NAN),
                noisy_rhs: first.rhs,
                noisy_rhs_se: first.rhs_se.unwrap_or(f64::NAN),
            })
        })
        .collect::<Result<_>>()?;

    Ok(Fig3Outcome {
        rows,
        noiseless: noiseless.into_iter().map(|m| m.report).collect(),
        noisy,
        within,
        algebra,
    })
}

pub fn checks(p: &Fig3Params, out: &Fig3Outcome) -> Vec<Check> {
    let mut checks = Vec::new();
    let dev = out.noiseless_vs_algebra();
    checks.push(Check::new(
        "fig3.noiseless-matches-algebra",
        dev <= 1e-9,
        format!("max deviation {dev:.3e} (tolerance 1e-9)"),
    ));
    if p.input_purity >= 1.0 {
        let gap = out.noiseless_gap();
        checks.push(Check::new(
            "fig3.noiseless-saturation",
            gap <= 1e-9,
            format!(
                "max |lhs - rhs| {gap:.3e} over {} points (tolerance 1e-9)",
                out.rows.len()
            ),
        ));
    }
    let (median, required) = (out.median_within(), out.required_within());
    checks.push(Check::new(
        "fig3.noisy-within-3se",
        median >= required as f64,
        format!(
            "median {median} of {} points within 3 SE over {} trials (need {required})",
            out.rows.len(),
            out.within.len()
        ),
    ));
    checks
}

pub fn run(spec: &ExperimentSpec, p: &Fig3Params) -> Result<ReportBundle> {
    let out = simulate(p, spec.seed)?;
    let mut bundle = ReportBundle::new(spec);
    bundle.table(Table::from_rows(
        "fig3.csv",
        &[
            "s_deg",
            "t_mean",
            "theory_cos_phi",
            "algebra_lhs",
            "algebra_rhs",
            "noiseless_lhs",
            "noiseless_rhs",
            "noisy_t",
            "noisy_lhs",
            "noisy_lhs_se",
            "noisy_rhs",
            "noisy_rhs_se",
        ],
        &out.rows,
    )?);
    bundle.table(Table::from_rows(
        "fig3_trials.csv",
        &["trial", "points_within_3se"],
        out.within.iter().enumerate(),
    )?);
    bundle.report("noiseless", &out.noiseless)?;
    bundle.report("noisy_trial_0", &out.noisy[0])?;
    for c in checks(p, &out) {
        bundle.check(c);
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use uurlab_core::uur::bargmann_invariant;

    #[test]
    fn corners_form_an_equilateral_triangle() {
        let h = PureState::basis(2, 0).unwrap();
        for s_deg in [10.0f64, 60.0, 120.0] {
            let (u, v) = equilateral_unitaries(s_deg.to_radians()).unwrap();
            let (a, b) = (h.apply(&u).unwrap(), h.apply(&v).unwrap());
            let t = (s_deg.to_radians() / 2.0).cos().powi(2);
            assert!((h.inner(&a).unwrap().norm_sqr() - t).abs() < 1e-12);
            assert!((h.inner(&b).unwrap().norm_sqr() - t).abs() < 1e-12);
            assert!((a.inner(&b).unwrap().norm_sqr() - t).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_matches_bargmann_phase() {
        let rho = PureState::basis(2, 0).unwrap().density();
        let (u, v) = equilateral_unitaries(1.1).unwrap();
        let t = (0.55f64).cos().powi(2);
        let b = bargmann_invariant(&rho, &[UnitaryOp::identity(2), u, v]).unwrap();
        assert!((b.phase.cos() - saturation_curve(t)).abs() < 1e-12);
    }

    #[test]
    fn thirteen_sides_up_to_120() {
        let s = side_lengths(&Fig3Params::default());
        assert_eq!(s.len(), 13);
        assert!((s[12] - 120.0).abs() < 1e-12);
    }

    #[test]
    fn median_of_counts() {
        assert_eq!(median(&[3, 1, 2]), 2.0);
        assert_eq!(median(&[4, 1, 2, 3]), 2.5);
    }
}
