//! Overlap relation along a family of linearly polarised inputs with two
//! fixed waveplate stacks.

use rayon::prelude::*;
use serde::Serialize;
use uurlab_core::interferometer::{
    relation_from_scans, simulate_scan_set, waveplate_stack_unitary, ArmSetting,
    InterferometerConfig, RelationKind, WaveplateStack,
};
use uurlab_core::overlap::{mus_scan, our_evaluate, transition_probability, OverlapTriple};
use uurlab_core::qlinalg::matrix::c;
use uurlab_core::{PureState, RelationReport, UnitaryOp};

use super::interferometer_config;
use crate::config::{ExperimentSpec, Fig4Params};
use crate::error::Result;
use crate::report::{Check, ReportBundle, Table};

/// Noiseless values within this of 1 count as saturated.
const UNITY_TOL: f64 = 1e-9;
/// Sweep maxima above `1 - NEAR_UNITY` are compared with the family.
const NEAR_UNITY: f64 = 1e-2;

/// `cos(2h)|H> + sin(2h)|V>` for a preparation plate at `h_deg`.
pub fn input_state(h_deg: f64) -> PureState {
    let (s, co) = (2.0 * h_deg.to_radians()).sin_cos();
    PureState::from_slice(&[c(co, 0.0), c(s, 0.0)]).expect("unit vector")
}

/// Bloch vector of [`input_state`].
pub fn input_bloch(h_deg: f64) -> [f64; 3] {
    let (s, co) = (4.0 * h_deg.to_radians()).sin_cos();
    [s, 0.0, co]
}

pub fn sweep(p: &Fig4Params) -> Vec<f64> {
    let n = ((p.h_stop_deg - p.h_start_deg) / p.h_step_deg - 1e-9)
        .ceil()
        .max(0.0) as usize;
    (0..n)
        .map(|k| p.h_start_deg + p.h_step_deg * k as f64)
        .collect()
}

pub fn stacks(p: &Fig4Params) -> Result<(WaveplateStack, WaveplateStack)> {
    Ok((
        WaveplateStack::with_convention(p.u_stack_deg[0], p.u_stack_deg[1], p.convention)?,
        WaveplateStack::with_convention(p.v_stack_deg[0], p.v_stack_deg[1], p.convention)?,
    ))
}

/// Overlap-relation left-hand side of `(psi, U psi, V psi)`.
pub fn analytic_lhs(psi: &PureState, u: &UnitaryOp, v: &UnitaryOp) -> Result<f64> {
    let (a, b) = (psi.apply(u)?, psi.apply(v)?);
    Ok(our_evaluate(&OverlapTriple::from_states(psi, &a, &b)?)
        .relation
        .lhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig4Row {
    pub h_deg: f64,
    pub t_ui: f64,
    pub t_iv: f64,
    pub t_uv: f64,
    pub analytic_lhs: f64,
    pub noiseless_lhs: f64,
    pub noisy_lhs: f64,
    pub noisy_lhs_se: f64,
    pub noisy_within_3se: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Outcome {
    pub rows: Vec<Fig4Row>,
    pub noiseless: Vec<RelationReport>,
    pub noisy: Vec<RelationReport>,
}

impl Fig4Outcome {
    pub fn noiseless_vs_analytic(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.noiseless_lhs - r.analytic_lhs).abs())
            .fold(0.0, f64::max)
    }

    /// Sweep angles where the analytic curve reaches 1.
    pub fn unity_angles(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| (r.analytic_lhs - 1.0).abs() <= UNITY_TOL)
            .map(|r| r.h_deg)
            .collect()
    }

    pub fn noisy_fraction_within(&self) -> f64 {
        let n = self.rows.iter().filter(|r| r.noisy_within_3se).count();
        n as f64 / self.rows.len().max(1) as f64
    }

    /// Unity points plus interior local maxima above `1 - NEAR_UNITY`.
    pub fn crossing_candidates(&self) -> Vec<f64> {
        let l: Vec<f64> = self.rows.iter().map(|r| r.analytic_lhs).collect();
        let mut out = self.unity_angles();
        for k in 1..l.len().saturating_sub(1) {
            if l[k] >= l[k - 1]
                && l[k] >= l[k + 1]
                && l[k] > 1.0 - NEAR_UNITY
                && !out.contains(&self.rows[k].h_deg)
            {
                out.push(self.rows[k].h_deg);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

pub fn simulate(p: &Fig4Params, seed: u64) -> Result<Fig4Outcome> {
    let (su, sv) = stacks(p)?;
    let (u, v) = (waveplate_stack_unitary(&su), waveplate_stack_unitary(&sv));
    let (arm_u, arm_v) = (ArmSetting::stack("U", su), ArmSetting::stack("V", sv));
    let quiet = interferometer_config(
        p.counts_scale,
        p.phase_points,
        p.input_purity,
        p.waveplate_error_deg,
        p.phase_offset_deg,
        seed,
        false,
    );
    let noisy_cfg = InterferometerConfig {
        noise: true,
        ..quiet.clone()
    };
    let hs = sweep(p);

    let measured: Vec<(RelationReport, RelationReport)> = hs
        .par_iter()
        .enumerate()
        .map(|(k, &h)| {
            let rho = input_state(h).density();
            let base = 4 * k as u64;
            let a = relation_from_scans(
                RelationKind::OurTriple,
                &simulate_scan_set(&quiet, &rho, &arm_u, &arm_v, base)?,
                true,
            )?;
            let b = relation_from_scans(
                RelationKind::OurTriple,
                &simulate_scan_set(&noisy_cfg, &rho, &arm_u, &arm_v, base)?,
                true,
            )?;
            Ok((a, b))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(hs.len());
    for (&h, (quiet_r, noisy_r)) in hs.iter().zip(&measured) {
        let psi = input_state(h);
        let (a, b) = (psi.apply(&u)?, psi.apply(&v)?);
        let analytic = analytic_lhs(&psi, &u, &v)?;
        let se = noisy_r.lhs_se.unwrap_or(f64::NAN);
        rows.push(Fig4Row {
            h_deg: h,
            t_ui: transition_probability(&psi, &a)?,
            t_iv: transition_probability(&psi, &b)?,
            t_uv: transition_probability(&a, &b)?,
            analytic_lhs: analytic,
            noiseless_lhs: quiet_r.lhs,
            noisy_lhs: noisy_r.lhs,
            noisy_lhs_se: se,
            noisy_within_3se: (noisy_r.lhs - analytic).abs() <= 3.0 * se,
        });
    }
    let (noiseless, noisy) = measured.into_iter().unzip();
    Ok(Fig4Outcome {
        rows,
        noiseless,
        noisy,
    })
}

/// Largest angular distance (degrees) from a crossing candidate to the
/// nearest minimum-uncertainty family point, or `None` without families.
pub fn crossing_distance(p: &Fig4Params, out: &Fig4Outcome) -> Result<Option<f64>> {
    let (su, sv) = stacks(p)?;
    let set = mus_scan(
        &waveplate_stack_unitary(&su),
        &waveplate_stack_unitary(&sv),
        p.mus_resolution,
    )?;
    if set.families.is_empty() {
        return Ok(None);
    }
    let worst = out
        .crossing_candidates()
        .iter()
        .map(|&h| {
            let b = input_bloch(h);
            set.families
                .iter()
                .map(|f| f.distance_to(b))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(Some(worst.to_degrees()))
}

pub fn checks(p: &Fig4Params, out: &Fig4Outcome) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let ideal = p.input_purity >= 1.0 && p.waveplate_error_deg == 0.0;
    if ideal {
        let dev = out.noiseless_vs_analytic();
        checks.push(Check::new(
            "fig4.noiseless-matches-analytic",
            dev <= 1e-9,
            format!("max deviation {dev:.3e} (tolerance 1e-9)"),
        ));
        let unity = out.unity_angles();
        let reached = out
            .rows
            .iter()
            .filter(|r| unity.contains(&r.h_deg))
            .all(|r| (r.noiseless_lhs - 1.0).abs() <= UNITY_TOL);
        checks.push(Check::new(
            "fig4.touches-unity",
            !unity.is_empty() && reached,
            format!("lhs = 1 at h = {unity:?} deg"),
        ));
    }
    let frac = out.noisy_fraction_within();
    checks.push(Check::new(
        "fig4.noisy-within-3se",
        frac >= 0.95,
        format!(
            "{:.1}% of {} points within 3 SE (need 95%)",
            100.0 * frac,
            out.rows.len()
        ),
    ));
    let step = 4.0 * p.h_step_deg;
    let (passed, detail) = match crossing_distance(p, out)? {
        Some(d) => (
            d <= step,
            format!(
                "candidates {:?} deg lie within {d:.2} deg of a family (one step = {step} deg)",
                out.crossing_candidates()
            ),
        ),
        None => (false, "no minimum-uncertainty family found".to_string()),
    };
    checks.push(Check::new("fig4.mus-crossings", passed, detail));
    Ok(checks)
}

pub fn run(spec: &ExperimentSpec, p: &Fig4Params) -> Result<ReportBundle> {
    let out = simulate(p, spec.seed)?;
    let mut bundle = ReportBundle::new(spec);
    bundle.table(Table::from_rows(
        "fig4.csv",
        &[
            "h_deg",
            "t_ui",
            "t_iv",
            "t_uv",
            "analytic_lhs",
            "noiseless_lhs",
            "noisy_lhs",
            "noisy_lhs_se",
            "noisy_within_3se",
        ],
        &out.rows,
    )?);
    bundle.report("convention", &p.convention.id())?;
    bundle.report("noiseless", &out.noiseless)?;
    bundle.report("noisy", &out.noisy)?;
    for c in checks(p, &out)? {
        bundle.check(c);
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_has_ninety_points() {
        let s = sweep(&Fig4Params::default());
        assert_eq!(s.len(), 90);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[89], 89.0);
    }

    #[test]
    fn input_family_bloch_vectors() {
        for h in [0.0, 10.0, 22.5, 45.0, 70.0] {
            let b = input_state(h).bloch_vector().unwrap().components();
            let want = input_bloch(h);
            for k in 0..3 {
                assert!((b[k] - want[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn axis_inputs_saturate() {
        let (su, sv) = stacks(&Fig4Params::default()).unwrap();
        let (u, v) = (waveplate_stack_unitary(&su), waveplate_stack_unitary(&sv));
        for h in [0.0, 45.0] {
            assert!((analytic_lhs(&input_state(h), &u, &v).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(analytic_lhs(&input_state(20.0), &u, &v).unwrap() < 1.0 - 1e-6);
    }
}
