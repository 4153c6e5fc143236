#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use log::{info, warn};

use pathloss_core::ingest::{generate, read_csv, write_csv, SyntheticSpec};
use pathloss_core::sensitivity::parameter_trace;
use pathloss_core::{fit_with_reversion, fspl, preprocess, run_sweep, Dataset, FitFlag, ModelKind};

mod config;
mod output;

use config::{ModelArgs, Overrides, PrepArgs, RunConfig, Source, SourceArgs, SplitArgs};
use output::{
    model_curves_csv, sha256_hex, sweep_trace_csv, to_json, write_all_atomic, DatasetRecord, FitEntry, FitOptionsRecord,
    FitOutput, InputRecord, Provenance, SweepOutput, TOOL, VERSION,
};

/// An input file that does not exist; reported with exit status 2.
#[derive(Debug)]
pub struct MissingInput(pub PathBuf);

impl fmt::Display for MissingInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "input file not found: {}", self.0.display())
    }
}

impl std::error::Error for MissingInput {}

#[derive(Parser)]
#[command(name = "pathloss", version, about = "Fit, compare and stress-test large-scale path loss models")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Free space path loss in dB.
    Fspl {
        /// Frequency, GHz.
        frequency: f64,
        /// Distance, m.
        distance: f64,
    },
    /// Draw a synthetic campaign and write it as measurement CSV.
    Generate {
        /// JSON campaign description.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Threshold and bin a dataset, writing the result as CSV.
    Preprocess {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        prep: PrepArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fit the selected models; writes fit_report.json and model_curves.csv.
    Fit {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        prep: PrepArgs,
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Distances per frequency in model_curves.csv.
        #[arg(long, default_value_t = 50)]
        curve_points: usize,
    },
    /// Measurement/prediction split sweep; writes sweep_report.json and sweep_trace.csv.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        prep: PrepArgs,
        #[command(flatten)]
        models: ModelArgs,
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

const FIT_DEFAULT_MODELS: [ModelKind; 4] = [ModelKind::Abg, ModelKind::Ci, ModelKind::CiOpt, ModelKind::Cif];
const SWEEP_DEFAULT_MODELS: [ModelKind; 3] = [ModelKind::Abg, ModelKind::Ci, ModelKind::Cif];

fn read_input(path: &Path) -> anyhow::Result<Vec<u8>> {
    if !path.exists() {
        return Err(MissingInput(path.to_path_buf()).into());
    }
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(path: &Path, seed: Option<u64>) -> anyhow::Result<(SyntheticSpec, String)> {
    let bytes = read_input(path)?;
    let mut spec: SyntheticSpec =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing campaign description {}", path.display()))?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    Ok((spec, sha256_hex(&bytes)))
}

/// Loads the raw dataset and describes where it came from.
fn load(cfg: &RunConfig) -> anyhow::Result<(Dataset, InputRecord, Option<u64>)> {
    match &cfg.source {
        Source::Csv(path) => {
            let bytes = read_input(path)?;
            let ds = read_csv(bytes.as_slice()).with_context(|| format!("loading {}", path.display()))?;
            let record = InputRecord::Csv { path: path.display().to_string(), sha256: sha256_hex(&bytes) };
            Ok((ds, record, None))
        }
        Source::Synthetic(path) => {
            let (spec, sha256) = load_spec(path, cfg.seed)?;
            let ds = generate(&spec)?;
            let seed = spec.seed;
            Ok((ds, InputRecord::Synthetic { path: path.display().to_string(), sha256, spec }, Some(seed)))
        }
    }
}

fn prepare(cfg: &RunConfig) -> anyhow::Result<(Dataset, Provenance)> {
    let (raw, input, seed) = load(cfg)?;
    let (ds, summary) = preprocess(&raw, &cfg.preprocess)?;
    info!(
        "{} samples in, {} removed by threshold, {} after binning",
        summary.input_samples, summary.removed_by_threshold, summary.output_samples
    );
    let provenance =
        Provenance { tool: TOOL, version: VERSION, input, seed, preprocess: cfg.preprocess, preprocess_summary: summary };
    Ok((ds, provenance))
}

fn fit_options_record(cfg: &RunConfig) -> FitOptionsRecord {
    FitOptionsRecord { d0_bounds: [cfg.fit.d0_bounds.min, cfg.fit.d0_bounds.max], f0: cfg.fit.f0 }
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_fit(cfg: RunConfig, curve_points: usize) -> anyhow::Result<()> {
    let (ds, provenance) = prepare(&cfg)?;
    let mut warnings = Vec::new();
    let mut fits = Vec::new();
    for &kind in &cfg.models {
        let mut report = fit_with_reversion(&ds, kind, &cfg.fit).with_context(|| format!("fitting {kind}"))?;
        report.settings.preprocess = Some(cfg.preprocess);
        for flag in &report.flags {
            let note = match flag {
                FitFlag::AbSubstitutedForAbg => "ABG needs several frequencies; fitted AB (γ = 2) instead".to_string(),
                FitFlag::CifRevertedToCi => "single frequency: CIF reverts to CI (b = 0)".to_string(),
                FitFlag::D0AtBound { unconstrained_d0 } => {
                    format!("CIOpt optimum d0 = {unconstrained_d0} m lies outside the bounds; clamped")
                }
                FitFlag::D0Unidentifiable => "CIOpt PLE is 2, d0 is not identifiable; reported as 1 m".to_string(),
            };
            warn!("{note}");
            warnings.push(note);
        }
        info!("{kind}: σ = {:.4} dB over {} points", report.sigma, report.n_points);
        fits.push(FitEntry { requested: kind, report });
    }

    let dir = out_dir(&cfg);
    let curves = model_curves_csv(&ds, &fits, curve_points);
    let report = FitOutput {
        provenance,
        fit_options: fit_options_record(&cfg),
        dataset: DatasetRecord::of(&ds),
        warnings,
        fits,
    };
    write_all_atomic(&[
        (dir.join("fit_report.json"), to_json(&report)?),
        (dir.join("model_curves.csv"), curves.into_bytes()),
    ])
}

fn cmd_sweep(cfg: RunConfig) -> anyhow::Result<()> {
    let (ds, provenance) = prepare(&cfg)?;
    let spec = cfg.split.clone().expect("sweep always resolves a split");
    let sweep = run_sweep(&ds, &spec, &cfg.models, &cfg.fit)?;
    for p in &sweep.points {
        if let Some(reason) = &p.skipped {
            warn!("skipped {reason}");
        }
    }
    let trace = parameter_trace(&sweep);
    let csv = sweep_trace_csv(&sweep);
    let report = SweepOutput {
        provenance,
        fit_options: fit_options_record(&cfg),
        dataset: DatasetRecord::of(&ds),
        sweep,
        parameter_ranges: trace.ranges,
    };
    let dir = out_dir(&cfg);
    write_all_atomic(&[(dir.join("sweep_report.json"), to_json(&report)?), (dir.join("sweep_trace.csv"), csv.into_bytes())])
}

fn encode_csv(ds: &Dataset) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(ds, &mut buf)?;
    Ok(buf)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Fspl { frequency, distance } => {
            println!("{:.4}", fspl(frequency, distance)?);
            Ok(())
        }
        Command::Generate { spec, seed, output } => {
            let (spec, _) = load_spec(&spec, seed)?;
            let ds = generate(&spec)?;
            info!("generated {} samples with seed {}", ds.len(), spec.seed);
            write_all_atomic(&[(output, encode_csv(&ds)?)])
        }
        Command::Preprocess { source, prep, output } => {
            let cfg = RunConfig::resolve(Overrides {
                source: &source,
                prep: &prep,
                models: None,
                split: None,
                out_dir: None,
                default_models: &FIT_DEFAULT_MODELS,
            })?;
            let (ds, provenance) = prepare(&cfg)?;
            let s = provenance.preprocess_summary;
            eprintln!(
                "{} samples in, {} removed by threshold, {} written",
                s.input_samples, s.removed_by_threshold, s.output_samples
            );
            write_all_atomic(&[(output, encode_csv(&ds)?)])
        }
        Command::Fit { source, prep, models, out_dir, curve_points } => {
            let cfg = RunConfig::resolve(Overrides {
                source: &source,
                prep: &prep,
                models: Some(&models),
                split: None,
                out_dir: out_dir.as_ref(),
                default_models: &FIT_DEFAULT_MODELS,
            })?;
            cmd_fit(cfg, curve_points)
        }
        Command::Sweep { source, prep, models, split, out_dir } => {
            let cfg = RunConfig::resolve(Overrides {
                source: &source,
                prep: &prep,
                models: Some(&models),
                split: Some(&split),
                out_dir: out_dir.as_ref(),
                default_models: &SWEEP_DEFAULT_MODELS,
            })?;
            cmd_sweep(cfg)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<MissingInput>()) {
        2
    } else if err
        .chain()
        .any(|e| matches!(e.downcast_ref::<pathloss_core::Error>(), Some(pathloss_core::Error::EmptySweep(_))))
    {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
