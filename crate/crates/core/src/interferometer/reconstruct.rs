use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::InterferometerConfig;
use super::fit::{fit_fringe, FringeFit};
use super::scan::{simulate_scan, ArmSetting, FringeScan};
use crate::error::{Error, Result};
use crate::overlap::OUR_TOL;
use crate::qlinalg::DensityMatrix;
use crate::report::{RelationReport, Sense};
use crate::uur::{principal_arg, BARGMANN_CUTOFF, DET_SATURATION_TOL};

fn wrap(x: f64) -> f64 {
    principal_arg(crate::Complex64::from_polar(1.0, x))
}

/// `arg <U^dag V>` as `theta0(U, V) - theta0(I, I)`, wrapped into `(-pi, pi]`.
pub fn phase_difference(fit_uv: &FringeFit, fit_ref: &FringeFit) -> Result<f64> {
    fit_uv.require_phase()?;
    fit_ref.require_phase()?;
    Ok(wrap(fit_uv.theta0 - fit_ref.theta0))
}

/// `Phi = chi(U,V) - chi(U,I) - chi(I,V) + chi(I,I)` with its standard
/// error from the four phase errors in quadrature.
pub fn bargmann_phase_from_fits(
    fit_uv: &FringeFit,
    fit_ui: &FringeFit,
    fit_iv: &FringeFit,
    fit_ii: &FringeFit,
) -> Result<(f64, f64)> {
    for f in [fit_uv, fit_ui, fit_iv, fit_ii] {
        f.require_phase()?;
    }
    let phi = wrap(fit_uv.theta0 - fit_ui.theta0 - fit_iv.theta0 + fit_ii.theta0);
    let se = [fit_uv, fit_ui, fit_iv, fit_ii]
        .iter()
        .map(|f| f.se_theta0 * f.se_theta0)
        .sum::<f64>()
        .sqrt();
    Ok((phi, se))
}

/// The four fringes `(U,V)`, `(U,I)`, `(I,V)`, `(I,I)` on one input.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanSet {
    pub uv: Option<FringeScan>,
    pub ui: Option<FringeScan>,
    pub iv: Option<FringeScan>,
    pub ii: Option<FringeScan>,
}

impl ScanSet {
    pub fn scans(&self) -> impl Iterator<Item = &FringeScan> {
        [&self.uv, &self.ui, &self.iv, &self.ii]
            .into_iter()
            .flatten()
    }
}

fn need<'a>(scan: &'a Option<FringeScan>, name: &str) -> Result<&'a FringeScan> {
    scan.as_ref()
        .ok_or_else(|| Error::MissingScan(name.to_string()))
}

/// Simulates all four scans with streams `base_index .. base_index + 4`.
pub fn simulate_scan_set(
    config: &InterferometerConfig,
    state: &DensityMatrix,
    u: &ArmSetting,
    v: &ArmSetting,
    base_index: u64,
) -> Result<ScanSet> {
    let id = ArmSetting::identity();
    let pairs = [(u, v), (u, &id), (&id, v), (&id, &id)];
    let scans: Vec<FringeScan> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (l, r))| simulate_scan(config, state, l, r, base_index + k as u64))
        .collect::<Result<_>>()?;
    let mut it = scans.into_iter();
    Ok(ScanSet {
        uv: it.next(),
        ui: it.next(),
        iv: it.next(),
        ii: it.next(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `cos Phi >= (V_UI^2 + V_IV^2 + V_UV^2 - 1) / (2 V_UI V_IV V_UV)`.
    UurBargmann,
    /// `T12 + T13 + T23 - 2 sqrt(T12 T13 T23) <= 1` with `T = visibility^2`.
    OurTriple,
}

/// Fits the scans a relation needs and assembles it, with standard
/// errors propagated to each side.
pub fn relation_from_scans(
    kind: RelationKind,
    scans: &ScanSet,
    assume_pure: bool,
) -> Result<RelationReport> {
    let fit =
        |s: &Option<FringeScan>, name: &str| -> Result<FringeFit> { fit_fringe(need(s, name)?) };
    match kind {
        RelationKind::UurBargmann => {
            let fits = [
                fit(&scans.uv, "U,V")?,
                fit(&scans.ui, "U,I")?,
                fit(&scans.iv, "I,V")?,
                fit(&scans.ii, "I,I")?,
            ];
            relation_from_fits(kind, &fits, assume_pure)
        }
        RelationKind::OurTriple => {
            if !assume_pure {
                return Err(Error::RequiresPureState);
            }
            let fits = [
                fit(&scans.uv, "U,V")?,
                fit(&scans.ui, "U,I")?,
                fit(&scans.iv, "I,V")?,
            ];
            relation_from_fits(kind, &fits, assume_pure)
        }
    }
}

/// As [`relation_from_scans`] from fits ordered `(U,V), (U,I), (I,V)[, (I,I)]`.
pub fn relation_from_fits(
    kind: RelationKind,
    fits: &[FringeFit],
    assume_pure: bool,
) -> Result<RelationReport> {
    let get = |k: usize, name: &str| {
        fits.get(k)
            .ok_or_else(|| Error::MissingScan(name.to_string()))
    };
    let (uv, ui, iv) = (get(0, "U,V")?, get(1, "U,I")?, get(2, "I,V")?);
    let (z, x, y) = (uv.visibility, ui.visibility, iv.visibility);
    let (sz, sx, sy) = (uv.visibility_se, ui.visibility_se, iv.visibility_se);
    match kind {
        RelationKind::UurBargmann => {
            let ii = get(3, "I,I")?;
            let (phi, phi_se) = bargmann_phase_from_fits(uv, ui, iv, ii)?;
            let denom = 2.0 * x * y * z;
            if denom < 2.0 * BARGMANN_CUTOFF {
                return Ok(RelationReport::indeterminate(
                    Sense::GreaterEq,
                    DET_SATURATION_TOL,
                ));
            }
            let num = x * x + y * y + z * z - 1.0;
            let rhs = num / denom;
            // d(rhs)/dx = 2x/D - N/(D x), likewise for y and z.
            let d = |a: f64| 2.0 * a / denom - num / (denom * a);
            let rhs_se = ((d(x) * sx).powi(2) + (d(y) * sy).powi(2) + (d(z) * sz).powi(2)).sqrt();
            let lhs = phi.cos();
            let lhs_se = phi.sin().abs() * phi_se;
            Ok(
                RelationReport::new(lhs, rhs, Sense::GreaterEq, DET_SATURATION_TOL)
                    .with_errors(lhs_se, rhs_se),
            )
        }
        RelationKind::OurTriple => {
            if !assume_pure {
                return Err(Error::RequiresPureState);
            }
            let lhs = x * x + y * y + z * z - 2.0 * x * y * z;
            // d(lhs)/dx = 2x - 2yz.
            let lhs_se = (((2.0 * x - 2.0 * y * z) * sx).powi(2)
                + ((2.0 * y - 2.0 * x * z) * sy).powi(2)
                + ((2.0 * z - 2.0 * x * y) * sz).powi(2))
            .sqrt();
            Ok(RelationReport::new(lhs, 1.0, Sense::LessEq, OUR_TOL).with_errors(lhs_se, 0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::config::uniform_phase_grid;
    use crate::interferometer::scan::FringePoint;
    use crate::qlinalg::{rotation_between, rotation_unitary, PureState, UnitaryOp};
    use crate::uur::{bargmann_invariant, uur_bargmann_pair};
    use std::f64::consts::PI;

    fn fit_at(theta0: f64) -> FringeFit {
        let pts = uniform_phase_grid(16)
            .into_iter()
            .map(|t| FringePoint {
                theta: t,
                counts: 1000.0 * ((t - theta0) / 2.0).cos().powi(2),
            })
            .collect();
        fit_fringe(&FringeScan::new("a", "b", pts).unwrap()).unwrap()
    }

    fn h() -> DensityMatrix {
        PureState::basis(2, 0).unwrap().density()
    }

    #[test]
    fn phase_difference_wraps() {
        let a = fit_at(0.4);
        assert!(phase_difference(&a, &a).unwrap().abs() < 1e-15);
        let d = phase_difference(&fit_at(3.0), &fit_at(-3.0)).unwrap();
        assert!((d - (6.0 - 2.0 * PI)).abs() < 1e-9);
    }

    #[test]
    fn recovered_phase_matches_expectation() {
        let u = rotation_unitary([0.0, 1.0, 0.0], PI / 4.0).unwrap();
        let cfg = InterferometerConfig::noiseless();
        let set = simulate_scan_set(
            &cfg,
            &h(),
            &ArmSetting::fixed("U", u.clone()),
            &ArmSetting::identity(),
            0,
        )
        .unwrap();
        let fit_ui = fit_fringe(set.ui.as_ref().unwrap()).unwrap();
        let fit_ii = fit_fringe(set.ii.as_ref().unwrap()).unwrap();
        // The (U, I) fringe peaks at arg <U^dag>.
        let want = principal_arg(h().expectation(&u.matrix().adjoint()).unwrap());
        assert!((phase_difference(&fit_ui, &fit_ii).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn identity_scans_give_zero_phase() {
        let cfg = InterferometerConfig::noiseless();
        let i = ArmSetting::identity();
        let set = simulate_scan_set(&cfg, &h(), &i, &i, 0).unwrap();
        let f: Vec<_> = set.scans().map(|s| fit_fringe(s).unwrap()).collect();
        let (phi, _) = bargmann_phase_from_fits(&f[0], &f[1], &f[2], &f[3]).unwrap();
        assert!(phi.abs() < 1e-12);
    }

    #[test]
    fn octant_pipeline() {
        let z = [0.0, 0.0, 1.0];
        let u = rotation_between(z, [1.0, 0.0, 0.0]).unwrap();
        let v = rotation_between(z, [0.0, 1.0, 0.0]).unwrap();
        let cfg = InterferometerConfig {
            phase_offset: 0.37,
            ..InterferometerConfig::noiseless()
        };
        let set = simulate_scan_set(
            &cfg,
            &h(),
            &ArmSetting::fixed("U", u.clone()),
            &ArmSetting::fixed("V", v.clone()),
            0,
        )
        .unwrap();
        let f: Vec<_> = set.scans().map(|s| fit_fringe(s).unwrap()).collect();
        let (phi, _) = bargmann_phase_from_fits(&f[0], &f[1], &f[2], &f[3]).unwrap();
        let b = bargmann_invariant(&h(), &[UnitaryOp::identity(2), u.clone(), v.clone()]).unwrap();
        assert!((phi - b.phase).abs() < 1e-9);
        assert!((phi.abs() - PI / 4.0).abs() < 1e-9);

        let rep = relation_from_scans(RelationKind::UurBargmann, &set, true).unwrap();
        let alg = uur_bargmann_pair(&h(), &u, &v).unwrap();
        assert!((rep.lhs - alg.lhs).abs() < 1e-9 && (rep.rhs - alg.rhs).abs() < 1e-9);
    }

    #[test]
    fn missing_and_impure() {
        let set = ScanSet::default();
        assert!(matches!(
            relation_from_scans(RelationKind::UurBargmann, &set, true),
            Err(Error::MissingScan(_))
        ));
        assert!(matches!(
            relation_from_scans(RelationKind::OurTriple, &set, false),
            Err(Error::RequiresPureState)
        ));
    }
}
