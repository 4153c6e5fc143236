//! Core value types and forward evaluation of the large-scale path loss models.
//!
//! Frequencies are carried in GHz, distances in meters and losses in dB
//! throughout the crate. All evaluation here is of *mean* path loss; the
//! shadowing term only appears in the synthetic generator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::PreprocessSettings;

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free space path loss at 1 m and 1 GHz, `20·log10(4π·10⁹/c)` ≈ 32.4478 dB.
///
/// Usually quoted rounded to 32.4 dB.
pub fn fspl_1m_1ghz() -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * 1e9 / SPEED_OF_LIGHT).log10()
}

/// Free space path loss in dB at `freq_ghz` over `distance_m`.
pub fn fspl(freq_ghz: f64, distance_m: f64) -> Result<f64> {
    if !(freq_ghz > 0.0) || !freq_ghz.is_finite() {
        return Err(Error::Domain(format!("frequency must be > 0 GHz, got {freq_ghz}")));
    }
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::Domain(format!("distance must be > 0 m, got {distance_m}")));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * freq_ghz * distance_m * 1e9 / SPEED_OF_LIGHT).log10())
}

/// Deployment scenario label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    UMa,
    UMiSC,
    InHOffice,
    InHSM,
    Other(String),
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::UMa => f.write_str("UMa"),
            Scenario::UMiSC => f.write_str("UMiSC"),
            Scenario::InHOffice => f.write_str("InHOffice"),
            Scenario::InHSM => f.write_str("InHSM"),
            Scenario::Other(label) => write!(f, "Other:{label}"),
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "UMa" => Ok(Scenario::UMa),
            "UMiSC" => Ok(Scenario::UMiSC),
            "InHOffice" => Ok(Scenario::InHOffice),
            "InHSM" => Ok(Scenario::InHSM),
            other => match other.strip_prefix("Other:") {
                Some(label) => Ok(Scenario::Other(label.to_string())),
                None => Err(format!(
                    "unknown scenario `{other}` (expected UMa, UMiSC, InHOffice, InHSM or Other:<label>)"
                )),
            },
        }
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Environment {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "NLOS")]
    Nlos,
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Environment::Los => "LOS",
            Environment::Nlos => "NLOS",
        })
    }
}

impl FromStr for Environment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LOS" => Ok(Environment::Los),
            "NLOS" => Ok(Environment::Nlos),
            other => Err(format!("unknown environment `{other}` (expected LOS or NLOS)")),
        }
    }
}

/// One path loss observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathLossSample {
    /// Carrier frequency, GHz.
    pub frequency: f64,
    /// 3D T-R separation, m.
    pub distance: f64,
    /// Path loss, dB.
    pub path_loss: f64,
    pub scenario: Scenario,
    pub environment: Environment,
    pub campaign: String,
}

impl PathLossSample {
    pub fn new(
        frequency: f64,
        distance: f64,
        path_loss: f64,
        scenario: Scenario,
        environment: Environment,
        campaign: impl Into<String>,
    ) -> Result<Self> {
        let sample = PathLossSample {
            frequency,
            distance,
            path_loss,
            scenario,
            environment,
            campaign: campaign.into(),
        };
        sample.validate()?;
        Ok(sample)
    }

    /// Shorthand for tests and synthetic data: unlabeled UMa NLOS sample.
    pub fn bare(frequency: f64, distance: f64, path_loss: f64) -> Result<Self> {
        Self::new(frequency, distance, path_loss, Scenario::UMa, Environment::Nlos, "")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0) || !self.frequency.is_finite() {
            return Err(Error::Domain(format!(
                "frequency must be > 0 GHz, got {}",
                self.frequency
            )));
        }
        if !(self.distance >= 1.0) || !self.distance.is_finite() {
            return Err(Error::Domain(format!(
                "distance {} m is outside the model domain d ≥ 1 m",
                self.distance
            )));
        }
        if !self.path_loss.is_finite() {
            return Err(Error::Domain(format!("path loss must be finite, got {}", self.path_loss)));
        }
        Ok(())
    }
}

/// Number of samples observed at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCount {
    pub frequency: f64,
    pub count: usize,
}

/// Validated, immutable collection of samples.
///
/// The per-frequency summary lists each distinct frequency once, ascending.
/// Frequencies are compared with exact equality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    samples: Vec<PathLossSample>,
    freq_summary: Vec<FrequencyCount>,
}

impl Dataset {
    pub fn new(samples: Vec<PathLossSample>) -> Result<Self> {
        for s in &samples {
            s.validate()?;
        }
        let mut freqs: Vec<f64> = samples.iter().map(|s| s.frequency).collect();
        freqs.sort_by(f64::total_cmp);
        let mut freq_summary: Vec<FrequencyCount> = Vec::new();
        for f in freqs {
            match freq_summary.last_mut() {
                Some(last) if last.frequency == f => last.count += 1,
                _ => freq_summary.push(FrequencyCount { frequency: f, count: 1 }),
            }
        }
        Ok(Dataset { samples, freq_summary })
    }

    pub fn empty() -> Self {
        Dataset::default()
    }

    pub fn samples(&self) -> &[PathLossSample] {
        &self.samples
    }

    pub fn freq_summary(&self) -> &[FrequencyCount] {
        &self.freq_summary
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.freq_summary.iter().map(|fc| fc.frequency)
    }

    pub fn distinct_frequencies(&self) -> usize {
        self.freq_summary.len()
    }

    pub fn distinct_distances(&self) -> usize {
        let mut d: Vec<f64> = self.samples.iter().map(|s| s.distance).collect();
        d.sort_by(f64::total_cmp);
        d.dedup();
        d.len()
    }

    /// Keeps the samples matching `pred`, preserving order.
    pub fn filter(&self, mut pred: impl FnMut(&PathLossSample) -> bool) -> Dataset {
        let samples = self.samples.iter().filter(|s| pred(s)).cloned().collect();
        Dataset::new(samples).expect("subset of a valid dataset is valid")
    }

    pub fn into_samples(self) -> Vec<PathLossSample> {
        self.samples
    }
}

/// Weighted mean of the distinct frequencies, `Σ f_k·N_k / Σ N_k`, rounded
/// to the nearest integer GHz with halves rounded away from zero.
pub fn weighted_mean_frequency(ds: &Dataset) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (num, den) = ds
        .freq_summary()
        .iter()
        .fold((0.0, 0.0), |(num, den), fc| (num + fc.frequency * fc.count as f64, den + fc.count as f64));
    Ok((num / den).round())
}

/// Model family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "ABG")]
    Abg,
    #[serde(rename = "AB")]
    Ab,
    #[serde(rename = "CI")]
    Ci,
    #[serde(rename = "CIOpt")]
    CiOpt,
    #[serde(rename = "CIF")]
    Cif,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] =
        [ModelKind::Abg, ModelKind::Ab, ModelKind::Ci, ModelKind::CiOpt, ModelKind::Cif];

    /// Short lowercase name used on the command line and in CSV headers.
    pub fn slug(self) -> &'static str {
        match self {
            ModelKind::Abg => "abg",
            ModelKind::Ab => "ab",
            ModelKind::Ci => "ci",
            ModelKind::CiOpt => "ci-opt",
            ModelKind::Cif => "cif",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Abg => "ABG",
            ModelKind::Ab => "AB",
            ModelKind::Ci => "CI",
            ModelKind::CiOpt => "CIOpt",
            ModelKind::Cif => "CIF",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "abg" => Ok(ModelKind::Abg),
            "ab" => Ok(ModelKind::Ab),
            "ci" => Ok(ModelKind::Ci),
            "ci-opt" | "ciopt" | "ci_opt" => Ok(ModelKind::CiOpt),
            "cif" => Ok(ModelKind::Cif),
            other => Err(format!("unknown model `{other}` (expected abg, ab, ci, ci-opt or cif)")),
        }
    }
}

/// Fitted (or prescribed) parameters of one model family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum ModelParams {
    /// `10α·log10(d) + β + 10γ·log10(f)`.
    #[serde(rename = "ABG")]
    Abg { alpha: f64, beta: f64, gamma: f64 },
    /// ABG with γ pinned to 2.
    #[serde(rename = "AB")]
    Ab { alpha: f64, beta: f64 },
    /// Close-in model with a 1 m free space reference.
    #[serde(rename = "CI")]
    Ci { n: f64 },
    /// Close-in model with a fitted reference distance.
    #[serde(rename = "CIOpt")]
    CiOpt { n: f64, d0: f64 },
    /// Close-in model with a frequency-weighted exponent about `f0`.
    #[serde(rename = "CIF")]
    Cif { n: f64, b: f64, f0: f64 },
}

impl ModelParams {
    pub const AB_GAMMA: f64 = 2.0;

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Abg { .. } => ModelKind::Abg,
            ModelParams::Ab { .. } => ModelKind::Ab,
            ModelParams::Ci { .. } => ModelKind::Ci,
            ModelParams::CiOpt { .. } => ModelKind::CiOpt,
            ModelParams::Cif { .. } => ModelKind::Cif,
        }
    }

    /// Mean path loss in dB.
    pub fn eval(&self, freq_ghz: f64, distance_m: f64) -> Result<f64> {
        match *self {
            ModelParams::Abg { alpha, beta, gamma } => eval_abg(alpha, beta, gamma, freq_ghz, distance_m),
            ModelParams::Ab { alpha, beta } => eval_abg(alpha, beta, Self::AB_GAMMA, freq_ghz, distance_m),
            ModelParams::Ci { n } => eval_ci(n, 1.0, freq_ghz, distance_m),
            ModelParams::CiOpt { n, d0 } => eval_ci(n, d0, freq_ghz, distance_m),
            ModelParams::Cif { n, b, f0 } => eval_cif(n, b, f0, freq_ghz, distance_m),
        }
    }

    /// Parameter names and values in a fixed order, for tables and traces.
    pub fn named_values(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ModelParams::Abg { alpha, beta, gamma } => vec![("alpha", alpha), ("beta", beta), ("gamma", gamma)],
            ModelParams::Ab { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            ModelParams::Ci { n } => vec![("n", n)],
            ModelParams::CiOpt { n, d0 } => vec![("n", n), ("d0", d0)],
            ModelParams::Cif { n, b, f0 } => vec![("n", n), ("b", b), ("f0", f0)],
        }
    }
}

fn check_freq(freq_ghz: f64) -> Result<()> {
    if freq_ghz > 0.0 && freq_ghz.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("frequency must be > 0 GHz, got {freq_ghz}")))
    }
}

pub fn eval_abg(alpha: f64, beta: f64, gamma: f64, freq_ghz: f64, distance_m: f64) -> Result<f64> {
    check_freq(freq_ghz)?;
    if !(distance_m >= 1.0) {
        return Err(Error::Domain(format!("ABG is defined for d ≥ 1 m, got {distance_m}")));
    }
    Ok(10.0 * alpha * distance_m.log10() + beta + 10.0 * gamma * freq_ghz.log10())
}

pub fn eval_ci(n: f64, d0: f64, freq_ghz: f64, distance_m: f64) -> Result<f64> {
    if !(distance_m >= d0) {
        return Err(Error::Domain(format!("CI is defined for d ≥ d0 = {d0} m, got {distance_m}")));
    }
    Ok(fspl(freq_ghz, d0)? + 10.0 * n * (distance_m / d0).log10())
}

pub fn eval_cif(n: f64, b: f64, f0: f64, freq_ghz: f64, distance_m: f64) -> Result<f64> {
    if !(f0 > 0.0) || !f0.is_finite() {
        return Err(Error::Domain(format!("CIF reference frequency must be > 0, got {f0}")));
    }
    if !(distance_m >= 1.0) {
        return Err(Error::Domain(format!("CIF is defined for d ≥ 1 m, got {distance_m}")));
    }
    let exponent = n * (1.0 + b * (freq_ghz - f0) / f0);
    Ok(fspl(freq_ghz, 1.0)? + 10.0 * exponent * distance_m.log10())
}

/// Conditions under which a fit was produced, kept with the result so a run
/// can be reproduced.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FitSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preprocess: Option<PreprocessSettings>,
    /// Allowed reference distance range for CIOpt, m.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0_bounds: Option<[f64; 2]>,
    /// How the CIF reference frequency was chosen.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f0_rule: Option<String>,
}

/// Noteworthy conditions met while fitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum FitFlag {
    /// The PLE came out at 2, where any d0 gives the same predictions; d0 is reported as 1 m.
    D0Unidentifiable,
    /// The unconstrained optimum d0 fell outside the bounds; d0 sits on a bound.
    D0AtBound { unconstrained_d0: f64 },
    /// ABG was requested on single-frequency data and AB (γ = 2) was fitted.
    AbSubstitutedForAbg,
    /// CIF on single-frequency data: b is unidentifiable and reported as 0 (CI fit).
    CifRevertedToCi,
}

/// Fitted parameters with the shadow-fading statistics they produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub params: ModelParams,
    /// RMS of the residuals about the model, dB (no mean removal).
    pub sigma: f64,
    pub n_points: usize,
    /// Per-sample shadow fading χ (measured minus modeled), dB.
    pub residuals: Vec<f64>,
    #[serde(default)]
    pub settings: FitSettings,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<FitFlag>,
}

impl FitReport {
    pub fn new(params: ModelParams, residuals: Vec<f64>) -> Self {
        FitReport {
            params,
            sigma: rms(&residuals),
            n_points: residuals.len(),
            residuals,
            settings: FitSettings::default(),
            flags: Vec::new(),
        }
    }

    pub fn with_flag(mut self, flag: FitFlag) -> Self {
        self.flags.push(flag);
        self
    }

    pub fn has_flag(&self, pred: impl Fn(&FitFlag) -> bool) -> bool {
        self.flags.iter().any(pred)
    }
}

/// Root mean square; 0 for an empty slice.
pub fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}
