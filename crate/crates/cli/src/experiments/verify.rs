//! The full property suite.

use crate::checks::run_all;
use crate::config::{ExperimentSpec, VerifyParams};
use crate::error::Result;
use crate::report::{ReportBundle, Table};

pub fn run(spec: &ExperimentSpec, p: &VerifyParams) -> Result<ReportBundle> {
    let checks = run_all(p, spec.seed)?;
    let mut bundle = ReportBundle::new(spec);
    bundle.table(Table::from_rows(
        "verify.csv",
        &["check", "passed", "detail"],
        checks.iter().map(|c| (&c.name, c.passed, &c.detail)),
    )?);
    for c in checks {
        bundle.check(c);
    }
    Ok(bundle)
}
