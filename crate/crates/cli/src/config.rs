//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use serde::Deserialize;

use pathloss_core::preprocess::Averaging;
use pathloss_core::sensitivity::delta_grid;
use pathloss_core::{D0Bounds, F0Choice, FitOptions, ModelKind, PreprocessSettings, SplitSpec, SweepPreset};

use crate::MissingInput;

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// TOML run configuration; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Measurement CSV.
    #[arg(long, conflicts_with = "synthetic")]
    pub input: Option<PathBuf>,
    /// JSON synthetic campaign description, generated in memory.
    #[arg(long)]
    pub synthetic: Option<PathBuf>,
    /// Overrides the seed of a synthetic campaign.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    /// Distance bin width for local averaging, m.
    #[arg(long)]
    pub bin_width: Option<f64>,
    /// Samples above FSPL(f, 1 m) + margin are dropped, dB.
    #[arg(long)]
    pub threshold_margin: Option<f64>,
    #[arg(long)]
    pub no_binning: bool,
    #[arg(long)]
    pub no_threshold: bool,
    /// Averaging domain inside a bin: decibel or linear.
    #[arg(long, value_parser = parse_averaging)]
    pub averaging: Option<Averaging>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Comma-separated list from abg, ab, ci, ci-opt, cif.
    #[arg(long, value_delimiter = ',')]
    pub models: Option<Vec<ModelKind>>,
    /// CIF reference frequency in GHz, or `auto` for the weighted mean.
    #[arg(long, value_parser = parse_f0)]
    pub f0: Option<F0Choice>,
    /// Lower bound for the optimized CI reference distance, m.
    #[arg(long)]
    pub d0_min: Option<f64>,
    #[arg(long)]
    pub d0_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// uma-close, uma-far, umi-close, inh-close or frequency-loo.
    #[arg(long, conflicts_with_all = ["d_max", "d_min", "hold_out"])]
    pub preset: Option<SweepPreset>,
    /// Predict d ≤ d_max from d > d_max + δ.
    #[arg(long, conflicts_with_all = ["d_min", "hold_out"])]
    pub d_max: Option<f64>,
    /// Predict d ≥ d_min from d < d_min − δ.
    #[arg(long, conflicts_with = "hold_out")]
    pub d_min: Option<f64>,
    /// Gap values as `0,50,100` or `start:stop:step`.
    #[arg(long, value_parser = parse_delta_grid)]
    pub delta_grid: Option<Grid>,
    /// Frequencies to hold out (GHz, comma-separated) or `all`.
    #[arg(long, value_parser = parse_hold_out)]
    pub hold_out: Option<HoldOut>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub enum HoldOut {
    All,
    List(Vec<f64>),
}

fn parse_averaging(s: &str) -> Result<Averaging, String> {
    match s {
        "decibel" | "db" => Ok(Averaging::Decibel),
        "linear" => Ok(Averaging::Linear),
        _ => Err(format!("expected `decibel` or `linear`, got `{s}`")),
    }
}

fn parse_f0(s: &str) -> Result<F0Choice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(F0Choice::Auto);
    }
    s.parse::<f64>().map(F0Choice::Fixed).map_err(|_| format!("expected `auto` or a frequency in GHz, got `{s}`"))
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

pub fn parse_delta_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [list] => list.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?,
        [start, stop, step] => {
            let (start, stop, step) = (parse_number(start)?, parse_number(stop)?, parse_number(step)?);
            if !(step > 0.0) || stop < start {
                return Err(format!("bad range `{s}`"));
            }
            delta_grid(stop - start, step).into_iter().map(|v| start + v).collect()
        }
        _ => return Err(format!("expected a list or start:stop:step, got `{s}`")),
    };
    Ok(Grid(values))
}

fn parse_hold_out(s: &str) -> Result<HoldOut, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(HoldOut::All);
    }
    s.split(',').map(parse_number).collect::<Result<_, _>>().map(HoldOut::List)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum F0Value {
    Number(f64),
    Word(String),
}

/// On-disk configuration. Relative paths are resolved against the file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input: Option<PathBuf>,
    synthetic: Option<PathBuf>,
    seed: Option<u64>,
    models: Option<Vec<String>>,
    f0: Option<F0Value>,
    d0_bounds: Option<[f64; 2]>,
    out_dir: Option<PathBuf>,
    preprocess: Option<PreprocessSettings>,
    preset: Option<String>,
    split: Option<SplitSpec>,
}

impl ConfigFile {
    fn load(path: &Path) -> anyhow::Result<Self> {
        if !path.exists() {
            return Err(MissingInput(path.to_path_buf()).into());
        }
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: ConfigFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.input, &mut cfg.synthetic, &mut cfg.out_dir].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Csv(PathBuf),
    Synthetic(PathBuf),
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub seed: Option<u64>,
    pub preprocess: PreprocessSettings,
    pub models: Vec<ModelKind>,
    pub fit: FitOptions,
    pub split: Option<SplitSpec>,
    pub out_dir: Option<PathBuf>,
}

pub struct Overrides<'a> {
    pub source: &'a SourceArgs,
    pub prep: &'a PrepArgs,
    pub models: Option<&'a ModelArgs>,
    pub split: Option<&'a SplitArgs>,
    pub out_dir: Option<&'a PathBuf>,
    pub default_models: &'a [ModelKind],
}

impl RunConfig {
    pub fn resolve(args: Overrides<'_>) -> anyhow::Result<Self> {
        let file = match &args.source.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };

        let source = match (&args.source.input, &args.source.synthetic) {
            (Some(p), None) => Source::Csv(p.clone()),
            (None, Some(p)) => Source::Synthetic(p.clone()),
            (Some(_), Some(_)) => bail!("give either --input or --synthetic, not both"),
            (None, None) => match (file.input, file.synthetic) {
                (Some(p), None) => Source::Csv(p),
                (None, Some(p)) => Source::Synthetic(p),
                (Some(_), Some(_)) => bail!("config sets both `input` and `synthetic`; keep one"),
                (None, None) => bail!("no input: give --input <csv> or --synthetic <spec.json>"),
            },
        };

        let mut preprocess = file.preprocess.unwrap_or_default();
        let p = args.prep;
        if let Some(w) = p.bin_width {
            preprocess.bin_width = w;
        }
        if let Some(m) = p.threshold_margin {
            preprocess.threshold_margin = m;
        }
        if let Some(a) = p.averaging {
            preprocess.averaging = a;
        }
        preprocess.binning_enabled &= !p.no_binning;
        preprocess.threshold_enabled &= !p.no_threshold;
        preprocess.validate()?;

        let mut models = match file.models {
            Some(names) => names
                .iter()
                .map(|n| n.parse::<ModelKind>().map_err(anyhow::Error::msg))
                .collect::<anyhow::Result<Vec<_>>>()?,
            None => args.default_models.to_vec(),
        };
        let mut fit = FitOptions::default();
        if let Some(f0) = file.f0 {
            fit.f0 = match f0 {
                F0Value::Number(v) => F0Choice::Fixed(v),
                F0Value::Word(w) => parse_f0(&w).map_err(anyhow::Error::msg)?,
            };
        }
        if let Some([min, max]) = file.d0_bounds {
            fit.d0_bounds = D0Bounds { min, max };
        }
        if let Some(m) = args.models {
            if let Some(list) = &m.models {
                models = list.clone();
            }
            if let Some(f0) = m.f0 {
                fit.f0 = f0;
            }
            if let Some(v) = m.d0_min {
                fit.d0_bounds.min = v;
            }
            if let Some(v) = m.d0_max {
                fit.d0_bounds.max = v;
            }
        }
        if models.is_empty() {
            bail!("no models selected");
        }
        let mut seen = Vec::new();
        models.retain(|m| {
            let fresh = !seen.contains(m);
            seen.push(*m);
            fresh
        });
        fit.d0_bounds.validate()?;

        let split = match args.split {
            None => None,
            Some(s) => Some(resolve_split(s, file.preset.as_deref(), file.split)?),
        };

        Ok(RunConfig {
            source,
            seed: args.source.seed.or(file.seed),
            preprocess,
            models,
            fit,
            split,
            out_dir: args.out_dir.cloned().or(file.out_dir),
        })
    }
}

fn resolve_split(args: &SplitArgs, file_preset: Option<&str>, file_split: Option<SplitSpec>) -> anyhow::Result<SplitSpec> {
    let mut spec = if let Some(p) = args.preset {
        p.spec()
    } else if let Some(d_max) = args.d_max {
        SplitSpec::DistanceClose { d_max, delta_grid: delta_grid(600.0, 50.0) }
    } else if let Some(d_min) = args.d_min {
        SplitSpec::DistanceFar { d_min, delta_grid: delta_grid(400.0, 50.0) }
    } else if let Some(h) = &args.hold_out {
        SplitSpec::FrequencyLoo {
            held_out: match h {
                HoldOut::All => Vec::new(),
                HoldOut::List(v) => v.clone(),
            },
        }
    } else if let Some(s) = file_split {
        s
    } else if let Some(p) = file_preset {
        p.parse::<SweepPreset>().map_err(anyhow::Error::msg)?.spec()
    } else {
        SweepPreset::UmaClose.spec()
    };
    if let Some(Grid(grid)) = &args.delta_grid {
        match &mut spec {
            SplitSpec::DistanceClose { delta_grid, .. } | SplitSpec::DistanceFar { delta_grid, .. } => {
                *delta_grid = grid.clone();
            }
            SplitSpec::FrequencyLoo { .. } => bail!("--delta-grid does not apply to a frequency hold-out sweep"),
        }
    }
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_grid_forms() {
        assert_eq!(parse_delta_grid("0,50,100").unwrap().0, vec![0.0, 50.0, 100.0]);
        assert_eq!(parse_delta_grid("0:600:50").unwrap().0.len(), 13);
        assert_eq!(parse_delta_grid("10:30:10").unwrap().0, vec![10.0, 20.0, 30.0]);
        assert!(parse_delta_grid("0:10").is_err());
        assert!(parse_delta_grid("a,b").is_err());
    }

    #[test]
    fn hold_out_forms() {
        assert_eq!(parse_hold_out("all").unwrap(), HoldOut::All);
        assert_eq!(parse_hold_out("28,73").unwrap(), HoldOut::List(vec![28.0, 73.0]));
    }

    #[test]
    fn f0_forms() {
        assert_eq!(parse_f0("auto").unwrap(), F0Choice::Auto);
        assert_eq!(parse_f0("24").unwrap(), F0Choice::Fixed(24.0));
        assert!(parse_f0("x").is_err());
    }
}
