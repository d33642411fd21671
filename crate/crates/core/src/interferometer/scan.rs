use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use super::config::InterferometerConfig;
use super::waveplate::{mean_output, waveplate_stack_unitary, WaveplateStack};
use crate::error::{Error, Result};
use crate::qlinalg::{stream_rng, DensityMatrix, UnitaryOp};

/// One phase setting and its recorded counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringePoint {
    pub theta: f64,
    /// Non-negative; whole numbers for Poisson data, exact expectations
    /// for noiseless simulations.
    pub counts: f64,
}

/// Counts against phase for one pair of arm settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeScan {
    pub left: String,
    pub right: String,
    points: Vec<FringePoint>,
    /// Expected counts at unit probability, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts_scale: Option<f64>,
}

impl FringeScan {
    pub fn new(
        left: impl Into<String>,
        right: impl Into<String>,
        points: Vec<FringePoint>,
    ) -> Result<Self> {
        for p in &points {
            if !p.theta.is_finite() || !p.counts.is_finite() || p.counts < 0.0 {
                return Err(Error::MalformedScan(format!(
                    "invalid point theta={} counts={}",
                    p.theta, p.counts
                )));
            }
        }
        if points.windows(2).any(|w| w[1].theta <= w[0].theta) {
            return Err(Error::MalformedScan(
                "phases must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            left: left.into(),
            right: right.into(),
            points,
            counts_scale: None,
        })
    }

    pub fn with_counts_scale(mut self, scale: f64) -> Self {
        self.counts_scale = Some(scale);
        self
    }

    pub fn points(&self) -> &[FringePoint] {
        &self.points
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.theta).collect()
    }

    pub fn counts(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.counts).collect()
    }

    /// `scan_<left>_<right>.csv`.
    pub fn file_name(&self) -> String {
        format!("scan_{}_{}.csv", self.left, self.right)
    }

    /// Writes the `theta_rad,counts` table. Values use the shortest
    /// representation that reads back exactly.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta_rad", "counts"])?;
        for p in &self.points {
            w.write_record([p.theta.to_string(), p.counts.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        self.write_csv(File::create(&path)?)?;
        Ok(path)
    }

    pub fn read_csv<R: Read>(input: R, left: &str, right: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MalformedScan(format!("missing column `{name}`")))
        };
        let (it, ic) = (col("theta_rad")?, col("counts")?);
        let mut points = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let parse = |k: usize, what: &str| -> Result<f64> {
                rec.get(k)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::MalformedScan(format!("row {}: bad {what}", line + 1)))
            };
            points.push(FringePoint {
                theta: parse(it, "theta_rad")?,
                counts: parse(ic, "counts")?,
            });
        }
        Self::new(left, right, points)
    }

    /// Reads a scan file; arm labels come from a `scan_<left>_<right>.csv`
    /// name, otherwise the file stem labels the left arm and the right is
    /// left empty.
    pub fn load(path: &Path) -> Result<Self> {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let (left, right) = match stem.strip_prefix("scan_").and_then(|s| s.split_once('_')) {
            Some((l, r)) => (l.to_string(), r.to_string()),
            None => (stem.clone(), String::new()),
        };
        Self::read_csv(File::open(path)?, &left, &right)
    }
}

/// What one arm applies.
#[derive(Debug, Clone, PartialEq)]
pub enum ArmOp {
    /// The identity setting of a waveplate group, `(90, 0)`.
    Identity,
    Stack(WaveplateStack),
    /// An ideal unitary with no waveplate model behind it.
    Fixed(UnitaryOp),
}

/// A labelled arm operation.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSetting {
    pub label: String,
    pub op: ArmOp,
}

impl ArmSetting {
    pub fn identity() -> Self {
        Self {
            label: "I".into(),
            op: ArmOp::Identity,
        }
    }

    pub fn stack(label: impl Into<String>, stack: WaveplateStack) -> Self {
        Self {
            label: label.into(),
            op: ArmOp::Stack(stack),
        }
    }

    pub fn fixed(label: impl Into<String>, u: UnitaryOp) -> Self {
        Self {
            label: label.into(),
            op: ArmOp::Fixed(u),
        }
    }

    /// Nominal unitary, ignoring waveplate errors.
    pub fn unitary(&self) -> UnitaryOp {
        self.realised(0.0, 0.0)
    }

    fn realised(&self, d_alpha: f64, d_beta: f64) -> UnitaryOp {
        match &self.op {
            ArmOp::Identity if d_alpha == 0.0 && d_beta == 0.0 => UnitaryOp::identity(2),
            ArmOp::Identity => {
                waveplate_stack_unitary(&WaveplateStack::identity().perturbed(d_alpha, d_beta))
            }
            ArmOp::Stack(s) => waveplate_stack_unitary(&s.perturbed(d_alpha, d_beta)),
            ArmOp::Fixed(u) => u.clone(),
        }
    }
}

/// Mixes the nominal input with the maximally mixed state.
pub fn prepared_state(
    config: &InterferometerConfig,
    state: &DensityMatrix,
) -> Result<DensityMatrix> {
    if config.input_purity >= 1.0 {
        return Ok(state.clone());
    }
    state.depolarized(config.input_purity)
}

/// Simulates the fringe for `left` in one arm and `right` in the other.
///
/// Randomness (waveplate offsets, then Poisson counts) comes from the
/// stream `(config.seed, scan_index)` alone.
pub fn simulate_scan(
    config: &InterferometerConfig,
    state: &DensityMatrix,
    left: &ArmSetting,
    right: &ArmSetting,
    scan_index: u64,
) -> Result<FringeScan> {
    config.validate()?;
    let rho = prepared_state(config, state)?;
    let mut rng = stream_rng(config.seed, scan_index);

    let (u, v) = if config.waveplate_error_deg > 0.0 {
        let normal = Normal::new(0.0, config.waveplate_error_deg)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let d: [f64; 4] = std::array::from_fn(|_| normal.sample(&mut rng));
        (left.realised(d[0], d[1]), right.realised(d[2], d[3]))
    } else {
        (left.unitary(), right.unitary())
    };

    let mut points = Vec::with_capacity(config.phase_grid.len());
    for &theta in &config.phase_grid {
        let mean = config.counts_scale * mean_output(&rho, &u, &v, theta + config.phase_offset)?;
        let counts = if config.noise {
            if mean > 0.0 {
                Poisson::new(mean)
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?
                    .sample(&mut rng)
            } else {
                0.0
            }
        } else {
            mean
        };
        points.push(FringePoint { theta, counts });
    }
    Ok(
        FringeScan::new(left.label.clone(), right.label.clone(), points)?
            .with_counts_scale(config.counts_scale),
    )
}
