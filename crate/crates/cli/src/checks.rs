//! The acceptance suite: one function per criterion, each returning one or
//! more pass/fail verdicts.
//!
//! Every draw uses its own RNG stream `(seed, criterion << 40 | draw)`, so
//! results do not depend on thread scheduling.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use uurlab_core::interferometer::{
    fit_fringe, phase_difference, simulate_scan, ArmSetting, InterferometerConfig,
};
use uurlab_core::otoc::{heisenberg_evolve, otoc_bounds, otoc_value};
use uurlab_core::overlap::{
    bargmann_area_check, mus_scan, our4_evaluate, our_evaluate, trace_triangle_evaluate,
    OverlapTriple,
};
use uurlab_core::qlinalg::matrix::c;
use uurlab_core::qlinalg::random::{
    haar_unitary, random_density_matrix, random_hermitian, random_pure_state,
    random_qubit_with_radius, random_unit_vector3,
};
use uurlab_core::qlinalg::{rotation_unitary, stream_rng};
use uurlab_core::uur::{
    permutation_expansion_det, principal_arg, qubit_tight_relation, rs_limit_probe,
    schwarz_matrix_check, uur_evaluate,
};
use uurlab_core::{Complex64, DensityMatrix, PureState, UnitaryOp};

use crate::config::{Fig3Params, Fig4Params, VerifyParams};
use crate::error::Result;
use crate::experiments::{fig3, fig4};
use crate::report::Check;

pub const CRITERIA: usize = 15;

fn rng(seed: u64, criterion: u64, draw: u64) -> ChaCha8Rng {
    stream_rng(seed, (criterion << 40) | draw)
}

/// Runs `f` over `0..n` in parallel, keeping draw order.
fn draws<T: Send>(n: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n as u64).into_par_iter().map(f).collect()
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn min(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

fn wrapped(x: f64) -> f64 {
    principal_arg(Complex64::from_polar(1.0, x))
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| a[k] * b[k]).sum()
}

/// Three qubit states on a random great circle, within a semicircle.
pub fn geodesic_triple<R: Rng>(rng: &mut R) -> Result<[PureState; 3]> {
    let e1 = random_unit_vector3(rng);
    let r = random_unit_vector3(rng);
    let p = dot(e1, r);
    let raw = [r[0] - p * e1[0], r[1] - p * e1[1], r[2] - p * e1[2]];
    let n = dot(raw, raw).sqrt();
    let e2 = [raw[0] / n, raw[1] / n, raw[2] / n];
    let start = rng.random_range(0.0..2.0 * PI);
    let (a, b) = (rng.random_range(0.0..PI), rng.random_range(0.0..PI));
    let at = |t: f64| {
        let (s, co) = t.sin_cos();
        PureState::from_bloch([
            co * e1[0] + s * e2[0],
            co * e1[1] + s * e2[1],
            co * e1[2] + s * e2[2],
        ])
    };
    Ok([at(start)?, at(start + a)?, at(start + b)?])
}

fn embed_qutrit(psi: &PureState) -> Result<PureState> {
    let a = psi.amplitudes();
    Ok(PureState::from_slice(&[a[0], a[1], c(0.0, 0.0)])?)
}

/// Pure-state saturation with `d = n` and the runtime limit.
pub fn c01(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for d in [2usize, 3] {
        let dets = draws(p.saturation_draws, |k| {
            let mut r = rng(seed, 1, ((d as u64) << 32) | k);
            let psi = random_pure_state(d, &mut r).density();
            let us: Vec<_> = (0..d).map(|_| haar_unitary(d, &mut r)).collect();
            Ok(uur_evaluate(&psi, &us)?.det.norm())
        })?;
        total += dets.len();
        worst = worst.max(max(dets));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(vec![Check::new(
        "c01.pure-state-saturation",
        worst <= 1e-9 && secs < p.saturation_time_limit_s,
        format!(
            "max |det G| {worst:.2e} over {total} draws (tolerance 1e-9); {secs:.2} s (limit {} s)",
            p.saturation_time_limit_s
        ),
    )])
}

/// Positivity of the Gram matrix on mixed states.
pub fn c02(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let eigs = draws(p.psd_draws, |k| {
        let mut r = rng(seed, 2, k);
        let d = 2 + (k % 3) as usize;
        let n = 1 + ((k / 3) % 4) as usize;
        let rho = random_density_matrix(d, &mut r);
        let us: Vec<_> = (0..n).map(|_| haar_unitary(d, &mut r)).collect();
        Ok(uur_evaluate(&rho, &us)?.min_eigenvalue)
    })?;
    let lo = min(eigs);
    Ok(vec![Check::new(
        "c02.gram-psd",
        lo >= -1e-9,
        format!(
            "min eigenvalue {lo:.2e} over {} draws, d in 2..=4, n <= 4",
            p.psd_draws
        ),
    )])
}

/// Mixed-qubit criterion: commuting rotations saturate, non-parallel ones do not.
pub fn c03(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let out = draws(p.mixed_qubit_draws, |k| {
        let mut r = rng(seed, 3, k);
        let rho = random_qubit_with_radius(0.5, &mut r);
        let axis = random_unit_vector3(&mut r);
        let u = rotation_unitary(axis, r.random_range(0.3..3.0))?;
        let v = rotation_unitary(axis, r.random_range(0.3..3.0))?;
        let commuting = uur_evaluate(&rho, &[u, v])?.det.norm();
        let m = random_unit_vector3(&mut r);
        let n = loop {
            let n = random_unit_vector3(&mut r);
            if dot(m, n).abs() <= 10f64.to_radians().cos() {
                break n;
            }
        };
        let u = rotation_unitary(m, r.random_range(0.3..3.0))?;
        let v = rotation_unitary(n, r.random_range(0.3..3.0))?;
        Ok((commuting, uur_evaluate(&rho, &[u, v])?.det.re))
    })?;
    let worst = max(out.iter().map(|o| o.0));
    let positive = out.iter().filter(|o| o.1 > 0.0).count();
    Ok(vec![
        Check::new(
            "c03.commuting-saturate",
            worst <= 1e-10,
            format!(
                "max |det G| {worst:.2e} over {} radius-0.5 draws (tolerance 1e-10)",
                out.len()
            ),
        ),
        Check::new(
            "c03.separated-axes-positive",
            positive == out.len(),
            format!(
                "det G > 0 in {positive} of {} draws with axes >= 10 deg apart",
                out.len()
            ),
        ),
    ])
}

/// Robertson–Schrödinger limit: both scaled errors shrink linearly in `eps`.
pub fn c04(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let mut r = rng(seed, 4, 0);
    let rho = random_density_matrix(3, &mut r);
    let a = random_hermitian(3, &mut r);
    let b = random_hermitian(3, &mut r);
    let t = rs_limit_probe(&rho, &a, &b, &p.rs_eps)?;
    let linear = |ratios: &[f64]| ratios.iter().all(|x| (8.0..=12.0).contains(x));
    let fmt = |ratios: &[f64]| {
        ratios
            .iter()
            .map(|x| format!("{x:.2}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Ok(vec![
        Check::new(
            "c04.rs-limit-rhs",
            linear(&t.rhs_ratios),
            format!(
                "successive rhs error ratios [{}] (need each in [8, 12])",
                fmt(&t.rhs_ratios)
            ),
        ),
        Check::new(
            "c04.rs-limit-lhs",
            linear(&t.lhs_ratios),
            format!(
                "successive lhs error ratios [{}] (need each in [8, 12])",
                fmt(&t.lhs_ratios)
            ),
        ),
    ])
}

/// Permutation expansion of `det G` against the direct determinant.
pub fn c05(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let mut devs = Vec::new();
    for n in 1..=3usize {
        devs.extend(draws(p.oracle_draws, |k| {
            let mut r = rng(seed, 5, ((n as u64) << 32) | k);
            let d = r.random_range(2..=4usize);
            let rho = random_density_matrix(d, &mut r);
            let us: Vec<_> = (0..n).map(|_| haar_unitary(d, &mut r)).collect();
            Ok((permutation_expansion_det(&rho, &us)? - uur_evaluate(&rho, &us)?.det).norm())
        })?);
    }
    let worst = max(devs.iter().copied());
    Ok(vec![Check::new(
        "c05.determinant-oracle",
        worst <= 1e-10,
        format!(
            "max deviation {worst:.2e} over {} draws, n in 1..=3 (tolerance 1e-10)",
            devs.len()
        ),
    )])
}

/// Bloch-triangle area equals twice the Bargmann phase.
pub fn c06(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let defects = draws(p.area_draws, |k| {
        let mut r = rng(seed, 6, k);
        let s: Vec<_> = (0..3).map(|_| random_pure_state(2, &mut r)).collect();
        Ok(bargmann_area_check(&s[0], &s[1], &s[2])?.defect)
    })?;
    let worst = max(defects);
    let octant = bargmann_area_check(
        &PureState::from_bloch([1.0, 0.0, 0.0])?,
        &PureState::from_bloch([0.0, 1.0, 0.0])?,
        &PureState::from_bloch([0.0, 0.0, 1.0])?,
    )?;
    let octant_ok =
        (octant.phase.abs() - FRAC_PI_4).abs() <= 1e-10 && (octant.area - FRAC_PI_2).abs() <= 1e-10;
    Ok(vec![
        Check::new(
            "c06.area-phase",
            worst <= 1e-8,
            format!(
                "max |area - 2|phase|| {worst:.2e} over {} qubit triples (tolerance 1e-8)",
                p.area_draws
            ),
        ),
        Check::new(
            "c06.octant",
            octant_ok,
            format!(
                "|phase| {:.12}, area {:.12} (want pi/4, pi/2)",
                octant.phase.abs(),
                octant.area
            ),
        ),
    ])
}

/// Three-state overlap relation: random triples, geodesics and the witness.
pub fn c07(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let lhs = draws(p.our_draws, |k| {
        let mut r = rng(seed, 7, k);
        let d = 2 + (k % 3) as usize;
        let s: Vec<_> = (0..3).map(|_| random_pure_state(d, &mut r)).collect();
        Ok(
            our_evaluate(&OverlapTriple::from_states(&s[0], &s[1], &s[2])?)
                .relation
                .lhs,
        )
    })?;
    let top = lhs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let geo = draws(p.area_draws, |k| {
        let mut r = rng(seed, 7, (1 << 32) | k);
        let [a, b, cc] = geodesic_triple(&mut r)?;
        Ok((our_evaluate(&OverlapTriple::from_states(&a, &b, &cc)?)
            .relation
            .lhs
            - 1.0)
            .abs())
    })?;
    let geo_worst = max(geo);
    let w = trace_triangle_evaluate(&OverlapTriple::new(0.0, 0.75, 0.75)?);
    let witness_ok = (w.our.relation.lhs - 1.5).abs() <= 1e-12 && w.our.infeasible && w.all_hold();
    Ok(vec![
        Check::new(
            "c07.random-triples",
            top <= 1.0 + 1e-12,
            format!("max lhs {top:.15} over {} triples, d in 2..=4", p.our_draws),
        ),
        Check::new(
            "c07.geodesic-saturation",
            geo_worst <= 1e-10,
            format!(
                "max |lhs - 1| {geo_worst:.2e} over {} geodesic triples",
                p.area_draws
            ),
        ),
        Check::new(
            "c07.witness",
            witness_ok,
            format!(
                "T = (0, 3/4, 3/4): lhs {}, infeasible {}, trace-distance inequalities hold {}",
                w.our.relation.lhs,
                w.our.infeasible,
                w.all_hold()
            ),
        ),
    ])
}

/// Four-state overlap relation on qutrits.
pub fn c08(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let slacks = draws(p.our4_draws, |k| {
        let mut r = rng(seed, 8, k);
        let s: Vec<_> = (0..4).map(|_| random_pure_state(3, &mut r)).collect();
        Ok(our4_evaluate([&s[0], &s[1], &s[2], &s[3]])?.slack)
    })?;
    let lo = min(slacks);
    let two = PureState::basis(3, 2)?;
    let built = draws(100, |k| {
        let mut r = rng(seed, 8, (1 << 32) | k);
        let [a, b, cc] = geodesic_triple(&mut r)?;
        let (a, b, cc) = (embed_qutrit(&a)?, embed_qutrit(&b)?, embed_qutrit(&cc)?);
        Ok(our4_evaluate([&a, &b, &cc, &two])?.slack.abs())
    })?;
    let worst = max(built);
    Ok(vec![
        Check::new(
            "c08.random-qutrits",
            lo >= -1e-10,
            format!("min slack {lo:.2e} over {} qutrit 4-tuples", p.our4_draws),
        ),
        Check::new(
            "c08.construction-saturates",
            worst <= 1e-9,
            format!("max |slack| {worst:.2e} for geodesic qubit triples plus |2>"),
        ),
    ])
}

/// Correlator bounds on random evolutions and the Pauli value.
pub fn c09(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let slacks = draws(p.otoc_draws, |k| {
        let mut r = rng(seed, 9, k);
        let d = 2 + (k % 3) as usize;
        let rho = random_density_matrix(d, &mut r);
        let v = haar_unitary(d, &mut r);
        let w = haar_unitary(d, &mut r);
        let h = random_hermitian(d, &mut r);
        let t = r.random_range(0.0..3.0);
        let rep = otoc_bounds(&rho, &v, &heisenberg_evolve(&w, &h, t)?)?;
        Ok(rep.upper.slack.min(rep.lower.slack))
    })?;
    let lo = min(slacks);
    let f = otoc_value(
        &DensityMatrix::maximally_mixed(2)?,
        &UnitaryOp::pauli_x(),
        &UnitaryOp::pauli_y(),
    )?;
    Ok(vec![
        Check::new(
            "c09.otoc-bounds",
            lo >= -1e-10,
            format!("min slack {lo:.2e} over {} draws, d in 2..=4", p.otoc_draws),
        ),
        Check::new("c09.pauli", f == c(-1.0, 0.0), format!("F(X, Y) = {f}")),
    ])
}

/// Schwarz matrix form.
pub fn c10(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let eigs = draws(p.schwarz_draws, |k| {
        let mut r = rng(seed, 10, k);
        let d = 2 + (k % 3) as usize;
        let n = 1 + ((k / 3) % 4) as usize;
        let rho = random_density_matrix(d, &mut r);
        let us: Vec<_> = (0..n).map(|_| haar_unitary(d, &mut r)).collect();
        Ok(schwarz_matrix_check(&rho, &us)?)
    })?;
    let lo = min(eigs);
    Ok(vec![Check::new(
        "c10.schwarz",
        lo >= -1e-9,
        format!(
            "min eigenvalue of C - u u^dag {lo:.2e} over {} draws, n <= 4",
            p.schwarz_draws
        ),
    )])
}

/// Qubit product identity and pure-state equality.
pub fn c11(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let out = draws(p.qubit_draws, |k| {
        let mut r = rng(seed, 11, k);
        let rho = random_density_matrix(2, &mut r);
        let (a, b) = (random_unit_vector3(&mut r), random_unit_vector3(&mut r));
        let mixed = qubit_tight_relation(&rho, a, b)?.identity_residual;
        let psi = random_pure_state(2, &mut r).density();
        let pure = qubit_tight_relation(&psi, a, b)?;
        Ok((
            mixed.max(pure.identity_residual),
            pure.moment_relation.slack.abs(),
        ))
    })?;
    let ident = max(out.iter().map(|o| o.0));
    let eq = max(out.iter().map(|o| o.1));
    Ok(vec![
        Check::new(
            "c11.identity",
            ident <= 1e-10,
            format!(
                "max identity residual {ident:.2e} over {} draws (tolerance 1e-10)",
                p.qubit_draws
            ),
        ),
        Check::new(
            "c11.pure-equality",
            eq <= 1e-9,
            format!("max |slack| {eq:.2e} for pure states (tolerance 1e-9)"),
        ),
    ])
}

/// Fringe fits reproduce `|<U^dag V>|` and its phase.
pub fn c12(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let quiet = InterferometerConfig {
        phase_offset: 0.7,
        ..InterferometerConfig::noiseless()
    };
    let exact = draws(p.oracle_draws, |k| {
        let mut r = rng(seed, 12, k);
        let rho = random_pure_state(2, &mut r).density();
        let (u, v) = (haar_unitary(2, &mut r), haar_unitary(2, &mut r));
        let o = rho.expectation(&(u.matrix().adjoint() * v.matrix()))?;
        let uv = simulate_scan(
            &quiet,
            &rho,
            &ArmSetting::fixed("U", u),
            &ArmSetting::fixed("V", v),
            2 * k,
        )?;
        let ii = simulate_scan(
            &quiet,
            &rho,
            &ArmSetting::identity(),
            &ArmSetting::identity(),
            2 * k + 1,
        )?;
        let (fu, fi) = (fit_fringe(&uv)?, fit_fringe(&ii)?);
        let phase_dev = if fu.theta0_constrained {
            wrapped(phase_difference(&fu, &fi)? - o.arg()).abs()
        } else {
            0.0
        };
        Ok(((fu.visibility - o.norm()).abs(), phase_dev))
    })?;
    let vis_dev = max(exact.iter().map(|e| e.0));
    let phase_dev = max(exact.iter().map(|e| e.1));

    let good = draws(p.fringe_trials, |k| {
        let mut r = rng(seed, 12, (1 << 32) | k);
        let rho = random_pure_state(2, &mut r).density();
        let (u, v) = (haar_unitary(2, &mut r), haar_unitary(2, &mut r));
        let truth = rho
            .expectation(&(u.matrix().adjoint() * v.matrix()))?
            .norm();
        let cfg = InterferometerConfig {
            counts_scale: 1e4,
            seed,
            ..InterferometerConfig::default()
        };
        let scan = simulate_scan(
            &cfg,
            &rho,
            &ArmSetting::fixed("U", u),
            &ArmSetting::fixed("V", v),
            (1 << 32) | k,
        )?;
        Ok((fit_fringe(&scan)?.visibility - truth).abs() <= 0.02)
    })?;
    let hits = good.iter().filter(|g| **g).count();
    let need = (95 * p.fringe_trials).div_ceil(100);
    Ok(vec![
        Check::new(
            "c12.noiseless-fits",
            vis_dev <= 1e-9 && phase_dev <= 1e-9,
            format!(
                "max visibility deviation {vis_dev:.2e}, max phase deviation {phase_dev:.2e} over {} draws",
                p.oracle_draws
            ),
        ),
        Check::new(
            "c12.noisy-visibility",
            hits >= need,
            format!("|V - V_true| <= 0.02 in {hits} of {} trials at counts_scale 1e4 (need {need})", p.fringe_trials),
        ),
    ])
}

/// Equilateral-triangle sweep, noiseless and noisy.
pub fn c13(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let params = Fig3Params {
        trials: p.fig3_trials,
        ..Fig3Params::default()
    };
    let out = fig3::simulate(&params, seed)?;
    let gap = out.noiseless_gap();
    let (median, need) = (out.median_within(), out.required_within());
    Ok(vec![
        Check::new(
            "c13.fig3-noiseless",
            gap <= 1e-9,
            format!("max |lhs - rhs| {gap:.2e} over {} points (tolerance 1e-9)", out.rows.len()),
        ),
        Check::new(
            "c13.fig3-noisy",
            median >= need as f64,
            format!(
                "median {median} of {} points with both sides within 3 SE over {} trials (need {need})",
                out.rows.len(),
                out.within.len()
            ),
        ),
    ])
}

/// Linear-polarisation sweep with the two fixed stacks.
pub fn c14(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let params = Fig4Params {
        mus_resolution: p.mus_resolution,
        ..Fig4Params::default()
    };
    let out = fig4::simulate(&params, seed)?;
    Ok(fig4::checks(&params, &out)?
        .into_iter()
        .map(|c| Check {
            name: c.name.replacen("fig4.", "c14.fig4-", 1),
            ..c
        })
        .collect())
}

/// Minimum-uncertainty families for the two eighth-turn rotations.
pub fn c15(p: &VerifyParams, _seed: u64) -> Result<Vec<Check>> {
    let u = rotation_unitary([0.0, 1.0, 0.0], FRAC_PI_4)?;
    let v = rotation_unitary([0.0, 0.0, 1.0], FRAC_PI_4)?;
    let set = mus_scan(&u, &v, p.mus_resolution)?;
    let axes_ok = set.known_axis_hits.len() == 4
        && set
            .known_axis_hits
            .iter()
            .all(|h| h.recovered && h.residual <= 1e-6);
    let residuals: Vec<String> = set
        .known_axis_hits
        .iter()
        .map(|h| format!("{:.1e}", h.residual))
        .collect();
    let same = mus_scan(&u, &u, p.mus_resolution)?;
    Ok(vec![
        Check::new(
            "c15.two-families",
            !set.degenerate && set.families.len() == 2 && axes_ok,
            format!(
                "{} families, degenerate {}, +-y/+-z residuals [{}] all recovered {}",
                set.families.len(),
                set.degenerate,
                residuals.join(", "),
                axes_ok
            ),
        ),
        Check::new(
            "c15.commuting-degenerate",
            same.degenerate,
            format!("U = V reported degenerate: {}", same.degenerate),
        ),
    ])
}

/// Runs criterion `n` (1-based).
pub fn criterion(n: usize, p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let f = match n {
        1 => c01,
        2 => c02,
        3 => c03,
        4 => c04,
        5 => c05,
        6 => c06,
        7 => c07,
        8 => c08,
        9 => c09,
        10 => c10,
        11 => c11,
        12 => c12,
        13 => c13,
        14 => c14,
        15 => c15,
        _ => panic!("criterion {n} out of range 1..={CRITERIA}"),
    };
    f(p, seed)
}

/// Every criterion in order.
pub fn run_all(p: &VerifyParams, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=CRITERIA {
        out.extend(criterion(n, p, seed)?);
    }
    Ok(out)
}
