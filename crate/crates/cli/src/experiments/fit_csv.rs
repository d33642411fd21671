//! Fits recorded fringe scans and, given all four, reconstructs the
//! two-unitary Bargmann relation.

use uurlab_core::interferometer::{
    fit_fringe, relation_from_fits, FringeFit, FringeScan, RelationKind,
};

use crate::config::{ExperimentSpec, FitCsvParams};
use crate::error::{CliError, Result};
use crate::report::{Check, ReportBundle};

/// Arm labels of the `(U,V)`, `(U,I)`, `(I,V)`, `(I,I)` scans.
const FOUR_SCANS: [(&str, &str); 4] = [("U", "V"), ("U", "I"), ("I", "V"), ("I", "I")];

pub fn load_scans(p: &FitCsvParams) -> Result<Vec<FringeScan>> {
    p.files
        .iter()
        .map(|path| {
            if !path.is_file() {
                return Err(CliError::MissingInput(path.clone()));
            }
            let scan = FringeScan::load(path)?;
            Ok(match p.counts_scale {
                Some(s) => scan.with_counts_scale(s),
                None => scan,
            })
        })
        .collect()
}

/// Fits ordered as [`FOUR_SCANS`], when every one is present.
pub fn four_scan_fits(fits: &[FringeFit]) -> Option<Vec<FringeFit>> {
    FOUR_SCANS
        .iter()
        .map(|(l, r)| fits.iter().find(|f| f.left == *l && f.right == *r).cloned())
        .collect()
}

pub fn run(spec: &ExperimentSpec, p: &FitCsvParams) -> Result<ReportBundle> {
    let scans = load_scans(p)?;
    let mut bundle = ReportBundle::new(spec);
    let mut fits = Vec::with_capacity(scans.len());
    for (scan, path) in scans.iter().zip(&p.files) {
        let fit = fit_fringe(scan)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scan");
        bundle.document(format!("fit_{stem}.json"), &fit)?;
        bundle.check(Check::new(
            format!("fit.{stem}"),
            fit.visibility.is_finite(),
            format!(
                "visibility {:.6} +- {:.2e}, chi2/dof {:.3}",
                fit.visibility, fit.visibility_se, fit.chi2_dof
            ),
        ));
        fits.push(fit);
    }
    if let Some(four) = four_scan_fits(&fits) {
        let rel = relation_from_fits(RelationKind::UurBargmann, &four, false)?;
        bundle.check(Check::new(
            "fit.uur-bargmann",
            !rel.indeterminate,
            format!(
                "cos Phi {:.6} +- {:.2e} vs bound {:.6} +- {:.2e}",
                rel.lhs,
                rel.lhs_se.unwrap_or(f64::NAN),
                rel.rhs,
                rel.rhs_se.unwrap_or(f64::NAN)
            ),
        ));
        bundle.report("uur_bargmann", &rel)?;
    }
    bundle.report("fits", &fits)?;
    Ok(bundle)
}
