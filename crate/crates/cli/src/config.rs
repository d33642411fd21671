//! Experiment configuration: one JSON document per run.
//!
//! Every document names its `kind` and may set `seed` and `output_dir`;
//! the remaining keys belong to the kind. Angles are in degrees.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use uurlab_core::interferometer::{Convention, MIN_GRID_POINTS};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Verify,
    Fig3,
    Fig4,
    Musmap,
    Otoc,
    FitCsv,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Verify,
        ExperimentKind::Fig3,
        ExperimentKind::Fig4,
        ExperimentKind::Musmap,
        ExperimentKind::Otoc,
        ExperimentKind::FitCsv,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::Verify => "verify",
            ExperimentKind::Fig3 => "fig3",
            ExperimentKind::Fig4 => "fig4",
            ExperimentKind::Musmap => "musmap",
            ExperimentKind::Otoc => "otoc",
            ExperimentKind::FitCsv => "fit-csv",
        }
    }

    fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.id() == id)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Sample sizes for the property suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyParams {
    pub saturation_draws: usize,
    pub saturation_time_limit_s: f64,
    pub psd_draws: usize,
    pub mixed_qubit_draws: usize,
    pub rs_eps: Vec<f64>,
    pub oracle_draws: usize,
    pub area_draws: usize,
    pub our_draws: usize,
    pub our4_draws: usize,
    pub otoc_draws: usize,
    pub schwarz_draws: usize,
    pub qubit_draws: usize,
    pub fringe_trials: usize,
    pub fig3_trials: usize,
    pub mus_resolution: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            saturation_draws: 1000,
            saturation_time_limit_s: 10.0,
            psd_draws: 1000,
            mixed_qubit_draws: 500,
            rs_eps: vec![0.1, 0.01, 0.001],
            oracle_draws: 200,
            area_draws: 1000,
            our_draws: 10_000,
            our4_draws: 10_000,
            otoc_draws: 10_000,
            schwarz_draws: 1000,
            qubit_draws: 1000,
            fringe_trials: 500,
            fig3_trials: 20,
            mus_resolution: 64,
        }
    }
}

/// Equilateral-triangle sweep on `|H>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Params {
    /// Side lengths `s_max * k / points`, `k = 1..=points`.
    pub points: usize,
    pub s_max_deg: f64,
    pub counts_scale: f64,
    pub phase_points: usize,
    /// Independent noisy repetitions of the sweep.
    pub trials: usize,
    pub input_purity: f64,
    pub phase_offset_deg: f64,
}

impl Default for Fig3Params {
    fn default() -> Self {
        Self {
            points: 13,
            s_max_deg: 120.0,
            counts_scale: 4000.0,
            phase_points: 24,
            trials: 20,
            input_purity: 1.0,
            phase_offset_deg: 0.0,
        }
    }
}

/// Linear-polarisation input sweep with two fixed waveplate stacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig4Params {
    pub h_start_deg: f64,
    /// Exclusive upper end of the preparation-plate sweep.
    pub h_stop_deg: f64,
    pub h_step_deg: f64,
    /// `[alpha, beta]` of the first stack.
    pub u_stack_deg: [f64; 2],
    pub v_stack_deg: [f64; 2],
    pub convention: Convention,
    pub counts_scale: f64,
    pub phase_points: usize,
    pub input_purity: f64,
    pub waveplate_error_deg: f64,
    pub phase_offset_deg: f64,
    /// Grid used to locate the minimum-uncertainty family.
    pub mus_resolution: usize,
}

impl Default for Fig4Params {
    fn default() -> Self {
        Self {
            h_start_deg: 0.0,
            h_stop_deg: 90.0,
            h_step_deg: 1.0,
            u_stack_deg: [36.0, 0.0],
            v_stack_deg: [0.0, 36.0],
            convention: Convention::default(),
            counts_scale: 4000.0,
            phase_points: 24,
            input_purity: 1.0,
            waveplate_error_deg: 0.0,
            phase_offset_deg: 0.0,
            mus_resolution: 64,
        }
    }
}

/// Two qubit rotations `cos(a/2) I + i sin(a/2) n.sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MusmapParams {
    pub u_axis: [f64; 3],
    pub u_angle_deg: f64,
    pub v_axis: [f64; 3],
    pub v_angle_deg: f64,
    pub resolution: usize,
}

impl Default for MusmapParams {
    fn default() -> Self {
        Self {
            u_axis: [0.0, 1.0, 0.0],
            u_angle_deg: 45.0,
            v_axis: [0.0, 0.0, 1.0],
            v_angle_deg: 45.0,
            resolution: 64,
        }
    }
}

/// Random state, `V`, `W` and Hamiltonian drawn from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OtocParams {
    pub dim: usize,
    pub t_max: f64,
    pub t_points: usize,
    pub pure_state: bool,
}

impl Default for OtocParams {
    fn default() -> Self {
        Self {
            dim: 2,
            t_max: 3.0,
            t_points: 31,
            pure_state: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitCsvParams {
    pub files: Vec<PathBuf>,
    /// Expected counts at unit probability, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts_scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Verify(VerifyParams),
    Fig3(Fig3Params),
    Fig4(Fig4Params),
    Musmap(MusmapParams),
    Otoc(OtocParams),
    FitCsv(FitCsvParams),
}

impl Params {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Params::Verify(_) => ExperimentKind::Verify,
            Params::Fig3(_) => ExperimentKind::Fig3,
            Params::Fig4(_) => ExperimentKind::Fig4,
            Params::Musmap(_) => ExperimentKind::Musmap,
            Params::Otoc(_) => ExperimentKind::Otoc,
            Params::FitCsv(_) => ExperimentKind::FitCsv,
        }
    }

    /// Defaults for every kind except `fit-csv`, which needs files.
    pub fn defaults(kind: ExperimentKind) -> Option<Self> {
        Some(match kind {
            ExperimentKind::Verify => Params::Verify(VerifyParams::default()),
            ExperimentKind::Fig3 => Params::Fig3(Fig3Params::default()),
            ExperimentKind::Fig4 => Params::Fig4(Fig4Params::default()),
            ExperimentKind::Musmap => Params::Musmap(MusmapParams::default()),
            ExperimentKind::Otoc => Params::Otoc(OtocParams::default()),
            ExperimentKind::FitCsv => return None,
        })
    }

    fn to_map(&self) -> Map<String, Value> {
        let value = match self {
            Params::Verify(p) => serde_json::to_value(p),
            Params::Fig3(p) => serde_json::to_value(p),
            Params::Fig4(p) => serde_json::to_value(p),
            Params::Musmap(p) => serde_json::to_value(p),
            Params::Otoc(p) => serde_json::to_value(p),
            Params::FitCsv(p) => serde_json::to_value(p),
        };
        match value.expect("parameter structs serialise") {
            Value::Object(m) => m,
            _ => unreachable!("parameter structs serialise to objects"),
        }
    }
}

pub const DEFAULT_OUTPUT_DIR: &str = "uurlab-out";

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub params: Params,
}

impl ExperimentSpec {
    pub fn new(params: Params) -> Self {
        Self {
            seed: 0,
            output_dir: PathBuf::from(DEFAULT_OUTPUT_DIR),
            params,
        }
    }

    pub fn kind(&self) -> ExperimentKind {
        self.params.kind()
    }

    /// The resolved configuration as a JSON document that
    /// [`parse_config`] maps back to `self`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), Value::String(self.kind().id().into()));
        m.insert("seed".into(), Value::from(self.seed));
        m.insert(
            "output_dir".into(),
            Value::String(self.output_dir.to_string_lossy().into_owned()),
        );
        m.extend(self.params.to_map());
        Value::Object(m)
    }
}

pub fn ingest_config(path: &Path) -> Result<ExperimentSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path)
}

/// Parses, defaults and validates a configuration document. `path` only
/// labels diagnostics.
pub fn parse_config(text: &str, path: &Path) -> Result<ExperimentSpec, ConfigError> {
    let path_buf = path.to_path_buf();
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        path: path_buf.clone(),
        message: e.to_string(),
    })?;
    let Value::Object(mut map) = value else {
        return Err(ConfigError::Parse {
            path: path_buf,
            message: "top level must be an object".into(),
        });
    };
    let invalid = |field: &str, message: String| ConfigError::Invalid {
        path: path_buf.clone(),
        field: field.into(),
        message,
    };

    let kind = match map.remove("kind") {
        None => {
            return Err(ConfigError::MissingField {
                path: path_buf,
                field: "kind".into(),
            })
        }
        Some(Value::String(s)) => ExperimentKind::from_id(&s).ok_or(ConfigError::UnknownKind {
            path: path_buf.clone(),
            kind: s,
        })?,
        Some(other) => return Err(invalid("kind", format!("expected a string, got {other}"))),
    };
    let seed = match map.remove("seed") {
        None => 0,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| invalid("seed", format!("expected a non-negative integer, got {v}")))?,
    };
    let output_dir = match map.remove("output_dir") {
        None => PathBuf::from(DEFAULT_OUTPUT_DIR),
        Some(Value::String(s)) if !s.is_empty() => PathBuf::from(s),
        Some(v) => return Err(invalid("output_dir", format!("expected a path, got {v}"))),
    };

    let rest = Value::Object(map);
    let params = match kind {
        ExperimentKind::Verify => Params::Verify(params_from(rest, path)?),
        ExperimentKind::Fig3 => Params::Fig3(params_from(rest, path)?),
        ExperimentKind::Fig4 => Params::Fig4(params_from(rest, path)?),
        ExperimentKind::Musmap => Params::Musmap(params_from(rest, path)?),
        ExperimentKind::Otoc => Params::Otoc(params_from(rest, path)?),
        ExperimentKind::FitCsv => Params::FitCsv(params_from(rest, path)?),
    };
    validate(&params).map_err(|(field, message)| invalid(field, message))?;
    Ok(ExperimentSpec {
        seed,
        output_dir,
        params,
    })
}

fn params_from<T: DeserializeOwned>(value: Value, path: &Path) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        let message = e.inner().to_string();
        let path = path.to_path_buf();
        if let Some(key) = backticked(&message, "unknown field `") {
            ConfigError::UnknownKey { path, key }
        } else if let Some(field) = backticked(&message, "missing field `") {
            ConfigError::MissingField { path, field }
        } else {
            ConfigError::Invalid {
                path,
                field,
                message,
            }
        }
    })
}

fn backticked(message: &str, prefix: &str) -> Option<String> {
    let rest = message.strip_prefix(prefix)?;
    Some(rest[..rest.find('`')?].to_string())
}

pub type Violation = (&'static str, String);

fn positive(field: &'static str, v: f64) -> Result<(), Violation> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err((field, format!("must be positive, got {v}")))
    }
}

fn finite(field: &'static str, v: f64) -> Result<(), Violation> {
    if v.is_finite() {
        Ok(())
    } else {
        Err((field, format!("must be finite, got {v}")))
    }
}

fn at_least(field: &'static str, v: usize, min: usize) -> Result<(), Violation> {
    if v >= min {
        Ok(())
    } else {
        Err((field, format!("must be at least {min}, got {v}")))
    }
}

fn unit_interval(field: &'static str, v: f64) -> Result<(), Violation> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err((field, format!("must lie in [0, 1], got {v}")))
    }
}

fn unit_axis(field: &'static str, a: [f64; 3]) -> Result<(), Violation> {
    let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n.is_finite() && (n - 1.0).abs() <= 1e-9 {
        Ok(())
    } else {
        Err((field, format!("must be a unit vector, has length {n}")))
    }
}

pub fn validate(params: &Params) -> Result<(), Violation> {
    match params {
        Params::Verify(p) => {
            positive("saturation_time_limit_s", p.saturation_time_limit_s)?;
            if p.rs_eps.len() < 2 {
                return Err(("rs_eps", "needs at least two values".into()));
            }
            if let Some(e) = p.rs_eps.iter().find(|&&e| !(e > 0.0 && e <= 0.5)) {
                return Err(("rs_eps", format!("values must lie in (0, 0.5], got {e}")));
            }
            for (field, v) in [
                ("saturation_draws", p.saturation_draws),
                ("psd_draws", p.psd_draws),
                ("mixed_qubit_draws", p.mixed_qubit_draws),
                ("oracle_draws", p.oracle_draws),
                ("area_draws", p.area_draws),
                ("our_draws", p.our_draws),
                ("our4_draws", p.our4_draws),
                ("otoc_draws", p.otoc_draws),
                ("schwarz_draws", p.schwarz_draws),
                ("qubit_draws", p.qubit_draws),
                ("fringe_trials", p.fringe_trials),
                ("fig3_trials", p.fig3_trials),
            ] {
                at_least(field, v, 1)?;
            }
            at_least("mus_resolution", p.mus_resolution, 32)
        }
        Params::Fig3(p) => {
            at_least("points", p.points, 1)?;
            positive("s_max_deg", p.s_max_deg)?;
            if p.s_max_deg >= 180.0 {
                return Err((
                    "s_max_deg",
                    format!("must be below 180, got {}", p.s_max_deg),
                ));
            }
            positive("counts_scale", p.counts_scale)?;
            at_least("phase_points", p.phase_points, MIN_GRID_POINTS)?;
            at_least("trials", p.trials, 1)?;
            unit_interval("input_purity", p.input_purity)?;
            finite("phase_offset_deg", p.phase_offset_deg)
        }
        Params::Fig4(p) => {
            finite("h_start_deg", p.h_start_deg)?;
            finite("h_stop_deg", p.h_stop_deg)?;
            positive("h_step_deg", p.h_step_deg)?;
            if p.h_stop_deg <= p.h_start_deg {
                return Err(("h_stop_deg", "must exceed h_start_deg".into()));
            }
            for v in p.u_stack_deg {
                finite("u_stack_deg", v)?;
            }
            for v in p.v_stack_deg {
                finite("v_stack_deg", v)?;
            }
            positive("counts_scale", p.counts_scale)?;
            at_least("phase_points", p.phase_points, MIN_GRID_POINTS)?;
            unit_interval("input_purity", p.input_purity)?;
            if !(p.waveplate_error_deg.is_finite() && p.waveplate_error_deg >= 0.0) {
                return Err((
                    "waveplate_error_deg",
                    format!("must be non-negative, got {}", p.waveplate_error_deg),
                ));
            }
            finite("phase_offset_deg", p.phase_offset_deg)?;
            at_least("mus_resolution", p.mus_resolution, 32)
        }
        Params::Musmap(p) => {
            unit_axis("u_axis", p.u_axis)?;
            unit_axis("v_axis", p.v_axis)?;
            finite("u_angle_deg", p.u_angle_deg)?;
            finite("v_angle_deg", p.v_angle_deg)?;
            at_least("resolution", p.resolution, 32)
        }
        Params::Otoc(p) => {
            if !(2..=4).contains(&p.dim) {
                return Err(("dim", format!("must be 2, 3 or 4, got {}", p.dim)));
            }
            if !(p.t_max.is_finite() && p.t_max >= 0.0) {
                return Err(("t_max", format!("must be non-negative, got {}", p.t_max)));
            }
            at_least("t_points", p.t_points, 1)
        }
        Params::FitCsv(p) => {
            if p.files.is_empty() {
                return Err(("files", "needs at least one scan file".into()));
            }
            match p.counts_scale {
                Some(v) => positive("counts_scale", v),
                None => Ok(()),
            }
        }
    }
}
