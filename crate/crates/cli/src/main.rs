use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uurlab::config::{validate, FitCsvParams, Params};
use uurlab::{ingest_config, run_experiment, ConfigError, ExperimentKind, ExperimentSpec, Result};

const COMMAND_LINE: &str = "<command line>";

/// Unitary and overlap uncertainty relations: property checks and
/// simulated interferometer experiments.
#[derive(Debug, Parser)]
#[command(name = "uurlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the acceptance property suite.
    Verify(Common),
    /// Equilateral-triangle sweep of the two-unitary Bargmann relation.
    Fig3(Common),
    /// Linear-polarisation sweep of the three-state overlap relation.
    Fig4(Common),
    /// Minimum-uncertainty map for two qubit rotations.
    Musmap(Common),
    /// Correlator bounds along a random evolution.
    Otoc(Common),
    /// Fit recorded `theta_rad,counts` scan files.
    FitCsv {
        /// Scan CSV files, ideally named `scan_<left>_<right>.csv`.
        files: Vec<PathBuf>,
        /// Expected counts at unit probability.
        #[arg(long)]
        counts_scale: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

fn resolve(kind: ExperimentKind, common: &Common) -> Result<ExperimentSpec> {
    let mut spec = match &common.config {
        Some(path) => {
            let spec = ingest_config(path)?;
            if spec.kind() != kind {
                return Err(ConfigError::Invalid {
                    path: path.clone(),
                    field: "kind".into(),
                    message: format!(
                        "file describes `{}` but `{kind}` was requested",
                        spec.kind()
                    ),
                }
                .into());
            }
            spec
        }
        None => ExperimentSpec::new(Params::defaults(kind).expect("kind has defaults")),
    };
    if let Some(seed) = common.seed {
        spec.seed = seed;
    }
    if let Some(out) = &common.out {
        spec.output_dir = out.clone();
    }
    Ok(spec)
}

fn spec_for(command: &Command) -> Result<ExperimentSpec> {
    match command {
        Command::Verify(c) => resolve(ExperimentKind::Verify, c),
        Command::Fig3(c) => resolve(ExperimentKind::Fig3, c),
        Command::Fig4(c) => resolve(ExperimentKind::Fig4, c),
        Command::Musmap(c) => resolve(ExperimentKind::Musmap, c),
        Command::Otoc(c) => resolve(ExperimentKind::Otoc, c),
        Command::FitCsv {
            files,
            counts_scale,
            common,
        } => {
            let spec = if common.config.is_some() {
                let mut spec = resolve(ExperimentKind::FitCsv, common)?;
                if let Params::FitCsv(p) = &mut spec.params {
                    if !files.is_empty() {
                        p.files = files.clone();
                    }
                    if counts_scale.is_some() {
                        p.counts_scale = *counts_scale;
                    }
                }
                spec
            } else {
                if files.is_empty() {
                    return Err(ConfigError::MissingField {
                        path: PathBuf::from(COMMAND_LINE),
                        field: "files".into(),
                    }
                    .into());
                }
                let mut spec = ExperimentSpec::new(Params::FitCsv(FitCsvParams {
                    files: files.clone(),
                    counts_scale: *counts_scale,
                }));
                if let Some(out) = &common.out {
                    spec.output_dir = out.clone();
                }
                spec
            };
            validate(&spec.params).map_err(|(field, message)| ConfigError::Invalid {
                path: PathBuf::from(COMMAND_LINE),
                field: field.into(),
                message,
            })?;
            Ok(spec)
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let spec = spec_for(&cli.command)?;
    let bundle = run_experiment(&spec)?;
    for check in &bundle.checks {
        println!("{}", check.line());
    }
    let written = bundle.write(&spec.output_dir)?;
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(bundle.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
