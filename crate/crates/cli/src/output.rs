//! Report assembly and all-or-nothing file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use pathloss_core::preprocess::PreprocessSummary;
use pathloss_core::sensitivity::{ParameterRange, PredictionReport};
use pathloss_core::{fspl, Dataset, F0Choice, FitReport, FrequencyCount, ModelKind, PreprocessSettings};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Writes every file to a temporary sibling first and renames only once all
/// of them were written, so a failure never leaves a truncated output.
pub fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> anyhow::Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("staging {}", path.display()))?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputRecord {
    Csv { path: String, sha256: String },
    Synthetic { path: String, sha256: String, spec: pathloss_core::ingest::SyntheticSpec },
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: InputRecord,
    pub seed: Option<u64>,
    pub preprocess: PreprocessSettings,
    pub preprocess_summary: PreprocessSummary,
}

#[derive(Debug, Serialize)]
pub struct FitOptionsRecord {
    pub d0_bounds: [f64; 2],
    pub f0: F0Choice,
}

#[derive(Debug, Serialize)]
pub struct DatasetRecord {
    pub n_samples: usize,
    pub frequencies: Vec<FrequencyCount>,
}

impl DatasetRecord {
    pub fn of(ds: &Dataset) -> Self {
        DatasetRecord { n_samples: ds.len(), frequencies: ds.freq_summary().to_vec() }
    }
}

#[derive(Debug, Serialize)]
pub struct FitEntry {
    pub requested: ModelKind,
    #[serde(flatten)]
    pub report: FitReport,
}

#[derive(Debug, Serialize)]
pub struct FitOutput {
    pub provenance: Provenance,
    pub fit_options: FitOptionsRecord,
    pub dataset: DatasetRecord,
    pub warnings: Vec<String>,
    pub fits: Vec<FitEntry>,
}

#[derive(Debug, Serialize)]
pub struct SweepOutput {
    pub provenance: Provenance,
    pub fit_options: FitOptionsRecord,
    pub dataset: DatasetRecord,
    pub sweep: PredictionReport,
    pub parameter_ranges: Vec<ParameterRange>,
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Mean path loss of each fitted model against distance, one block per
/// frequency, with free space as a reference. Cells outside a model's
/// domain (CIOpt below its d0) are left empty.
pub fn model_curves_csv(ds: &Dataset, fits: &[FitEntry], points_per_frequency: usize) -> String {
    let d_lo = ds.samples().iter().map(|s| s.distance).fold(f64::INFINITY, f64::min).max(1.0);
    let d_hi = ds.samples().iter().map(|s| s.distance).fold(0.0, f64::max).max(d_lo);
    let mut out = String::from("frequency_ghz,distance_m,fspl_db");
    for e in fits {
        let _ = write!(out, ",{}_db", e.report.params.kind().slug());
    }
    out.push('\n');
    let steps = points_per_frequency.max(2) - 1;
    for f in ds.frequencies() {
        for k in 0..=steps {
            let d = if d_hi == d_lo { d_lo } else { d_lo * (d_hi / d_lo).powf(k as f64 / steps as f64) };
            let _ = write!(out, "{f},{d},{}", cell(fspl(f, d).ok()));
            for e in fits {
                let _ = write!(out, ",{}", cell(e.report.params.eval(f, d).ok()));
            }
            out.push('\n');
            if d_hi == d_lo {
                break;
            }
        }
    }
    out
}

/// One row per (sweep point, model, parameter); skipped points and models
/// get a single row with `skipped = true` and empty values.
pub fn sweep_trace_csv(report: &PredictionReport) -> String {
    let mut out = String::from(
        "sweep_point,model,fitted_model,param,value,measurement_sigma,prediction_sigma,n_meas,n_pred,skipped\n",
    );
    for p in &report.points {
        let x = p.point.value();
        if p.outcomes.is_empty() {
            for m in &report.models {
                let _ = writeln!(out, "{x},{m},,,,,,{},{},true", p.n_meas, p.n_pred);
            }
            continue;
        }
        for o in &p.outcomes {
            let skipped = o.skipped.is_some();
            let head = format!("{x},{}", o.model);
            let tail = format!(
                "{},{},{},{},{skipped}",
                cell(o.measurement_sigma),
                cell(o.prediction_sigma),
                p.n_meas,
                p.n_pred
            );
            match o.params {
                Some(params) if !skipped => {
                    for (name, value) in params.named_values() {
                        let _ = writeln!(out, "{head},{},{name},{value},{tail}", params.kind());
                    }
                }
                _ => {
                    let _ = writeln!(out, "{head},,,,{tail}");
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn atomic_write_creates_directories() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("a/b/out.txt");
        write_all_atomic(&[(target.clone(), b"hi".to_vec())]).unwrap();
        assert_eq!(fs::read(target).unwrap(), b"hi");
    }
}
