use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of phase settings accepted for fitting.
pub const MIN_GRID_POINTS: usize = 8;

/// `n` equally spaced phases on `[0, 2 pi)`.
pub fn uniform_phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

fn default_grid() -> Vec<f64> {
    uniform_phase_grid(24)
}
fn default_counts_scale() -> f64 {
    4000.0
}
fn default_noise() -> bool {
    true
}
fn default_purity() -> f64 {
    1.0
}

/// Simulation knobs for one interferometer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    /// Phase shifts `theta` in radians, strictly increasing.
    #[serde(default = "default_grid")]
    pub phase_grid: Vec<f64>,
    /// Expected counts at unit output probability.
    #[serde(default = "default_counts_scale")]
    pub counts_scale: f64,
    /// Poisson counts when set, exact expected counts otherwise.
    #[serde(default = "default_noise")]
    pub noise: bool,
    /// Weight `w` of the nominal input in `w rho + (1 - w) I/d`.
    #[serde(default = "default_purity")]
    pub input_purity: f64,
    /// Standard deviation (degrees) of per-scan waveplate angle offsets.
    #[serde(default)]
    pub waveplate_error_deg: f64,
    /// Unknown phase reference `chi_0` (radians) shared by every scan.
    #[serde(default)]
    pub phase_offset: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for InterferometerConfig {
    fn default() -> Self {
        Self {
            phase_grid: default_grid(),
            counts_scale: default_counts_scale(),
            noise: default_noise(),
            input_purity: default_purity(),
            waveplate_error_deg: 0.0,
            phase_offset: 0.0,
            seed: 0,
        }
    }
}

impl InterferometerConfig {
    pub fn noiseless() -> Self {
        Self {
            noise: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.counts_scale.is_finite() && self.counts_scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "counts_scale must be positive, got {}",
                self.counts_scale
            )));
        }
        if !(0.0..=1.0).contains(&self.input_purity) {
            return Err(Error::OutOfUnitInterval {
                what: "input_purity",
                value: self.input_purity,
            });
        }
        if !(self.waveplate_error_deg.is_finite() && self.waveplate_error_deg >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "waveplate_error_deg must be non-negative, got {}",
                self.waveplate_error_deg
            )));
        }
        if !self.phase_offset.is_finite() {
            return Err(Error::InvalidArgument("phase_offset must be finite".into()));
        }
        check_grid(&self.phase_grid)
    }
}

/// At least [`MIN_GRID_POINTS`] finite, strictly increasing phases whose
/// spacing-corrected extent `(last - first) n / (n - 1)` covers `2 pi`.
pub fn check_grid(thetas: &[f64]) -> Result<()> {
    let n = thetas.len();
    if n < MIN_GRID_POINTS {
        return Err(Error::NonSpanningGrid(format!(
            "{n} phase points, need at least {MIN_GRID_POINTS}"
        )));
    }
    if thetas.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonSpanningGrid("non-finite phase".into()));
    }
    if thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonSpanningGrid(
            "phases must be strictly increasing".into(),
        ));
    }
    let coverage = (thetas[n - 1] - thetas[0]) * n as f64 / (n - 1) as f64;
    if coverage < TAU * (1.0 - 1e-9) {
        return Err(Error::NonSpanningGrid(format!(
            "phases cover {coverage:.4} rad, need 2 pi"
        )));
    }
    Ok(())
}
