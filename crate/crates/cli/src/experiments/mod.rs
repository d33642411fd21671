//! Experiment pipelines, one module per kind.

pub mod fig3;
pub mod fig4;
pub mod fit_csv;
pub mod musmap;
pub mod otoc;
pub mod verify;

use uurlab_core::interferometer::{uniform_phase_grid, InterferometerConfig};

use crate::config::{ExperimentSpec, Params};
use crate::error::Result;
use crate::report::ReportBundle;

pub(crate) fn interferometer_config(
    counts_scale: f64,
    phase_points: usize,
    input_purity: f64,
    waveplate_error_deg: f64,
    phase_offset_deg: f64,
    seed: u64,
    noise: bool,
) -> InterferometerConfig {
    InterferometerConfig {
        phase_grid: uniform_phase_grid(phase_points),
        counts_scale,
        noise,
        input_purity,
        waveplate_error_deg,
        phase_offset: phase_offset_deg.to_radians(),
        seed,
    }
}

/// Runs one experiment and collects its tables, reports and checks.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ReportBundle> {
    match &spec.params {
        Params::Verify(p) => verify::run(spec, p),
        Params::Fig3(p) => fig3::run(spec, p),
        Params::Fig4(p) => fig4::run(spec, p),
        Params::Musmap(p) => musmap::run(spec, p),
        Params::Otoc(p) => otoc::run(spec, p),
        Params::FitCsv(p) => fit_csv::run(spec, p),
    }
}
