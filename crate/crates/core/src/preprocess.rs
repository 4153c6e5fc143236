//! Data conditioning before fitting: a frequency-dependent path loss
//! threshold followed by local averaging into fixed-width distance bins.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::domain::{fspl, Dataset, Environment, PathLossSample, Scenario};
use crate::error::{Error, Result};

/// Domain in which path loss values are averaged within a bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Arithmetic mean of dB values.
    #[default]
    Decibel,
    /// Mean of linear power gains, converted back to dB.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessSettings {
    /// Distance bin width, m.
    pub bin_width: f64,
    /// Samples weaker than `FSPL(f, 1 m) + threshold_margin` are dropped, dB.
    pub threshold_margin: f64,
    pub binning_enabled: bool,
    pub threshold_enabled: bool,
    pub averaging: Averaging,
}

impl Default for PreprocessSettings {
    fn default() -> Self {
        PreprocessSettings {
            bin_width: 2.0,
            threshold_margin: 100.0,
            binning_enabled: true,
            threshold_enabled: true,
            averaging: Averaging::Decibel,
        }
    }
}

impl PreprocessSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.bin_width > 0.0) || !self.bin_width.is_finite() {
            return Err(Error::InvalidSettings(format!("bin width must be > 0 m, got {}", self.bin_width)));
        }
        if !(self.threshold_margin > 0.0) || !self.threshold_margin.is_finite() {
            return Err(Error::InvalidSettings(format!(
                "threshold margin must be > 0 dB, got {}",
                self.threshold_margin
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdOutcome {
    pub dataset: Dataset,
    pub removed: usize,
}

/// Drops every sample with `path_loss > FSPL(f, 1 m) + margin`, keeping order.
pub fn threshold(ds: &Dataset, settings: &PreprocessSettings) -> Result<ThresholdOutcome> {
    settings.validate()?;
    let mut kept = Vec::with_capacity(ds.len());
    for s in ds.samples() {
        if s.path_loss <= fspl(s.frequency, 1.0)? + settings.threshold_margin {
            kept.push(s.clone());
        }
    }
    let removed = ds.len() - kept.len();
    Ok(ThresholdOutcome { dataset: Dataset::new(kept)?, removed })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BinKey {
    campaign: String,
    frequency: u64,
    environment: Environment,
    scenario: Scenario,
    bin: i64,
}

struct Accumulator {
    template: PathLossSample,
    count: usize,
    distance_sum: f64,
    loss_sum: f64,
}

/// Averages samples sharing campaign, frequency, environment, scenario and
/// distance bin `floor(d / bin_width)`.
///
/// Each bin becomes one sample at the mean member distance. Output order
/// follows the first appearance of each bin in the input.
pub fn bin_by_distance(ds: &Dataset, settings: &PreprocessSettings) -> Result<Dataset> {
    settings.validate()?;
    let mut index: HashMap<BinKey, usize> = HashMap::new();
    let mut groups: Vec<Accumulator> = Vec::new();
    for s in ds.samples() {
        let key = BinKey {
            campaign: s.campaign.clone(),
            frequency: s.frequency.to_bits(),
            environment: s.environment,
            scenario: s.scenario.clone(),
            bin: (s.distance / settings.bin_width).floor() as i64,
        };
        let loss_term = match settings.averaging {
            Averaging::Decibel => s.path_loss,
            Averaging::Linear => 10f64.powf(-s.path_loss / 10.0),
        };
        let slot = *index.entry(key).or_insert_with(|| {
            groups.push(Accumulator { template: s.clone(), count: 0, distance_sum: 0.0, loss_sum: 0.0 });
            groups.len() - 1
        });
        let acc = &mut groups[slot];
        acc.count += 1;
        acc.distance_sum += s.distance;
        acc.loss_sum += loss_term;
    }

    let samples = groups
        .into_iter()
        .map(|acc| {
            if acc.count == 1 {
                return acc.template;
            }
            let n = acc.count as f64;
            let path_loss = match settings.averaging {
                Averaging::Decibel => acc.loss_sum / n,
                Averaging::Linear => -10.0 * (acc.loss_sum / n).log10(),
            };
            PathLossSample { distance: acc.distance_sum / n, path_loss, ..acc.template }
        })
        .collect();
    Dataset::new(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PreprocessSummary {
    pub input_samples: usize,
    pub removed_by_threshold: usize,
    pub output_samples: usize,
}

/// Threshold, then bin, each step honoring its enable flag.
pub fn preprocess(ds: &Dataset, settings: &PreprocessSettings) -> Result<(Dataset, PreprocessSummary)> {
    settings.validate()?;
    let mut summary = PreprocessSummary { input_samples: ds.len(), ..Default::default() };
    let mut current = ds.clone();
    if settings.threshold_enabled {
        let out = threshold(&current, settings)?;
        summary.removed_by_threshold = out.removed;
        current = out.dataset;
    }
    if settings.binning_enabled {
        current = bin_by_distance(&current, settings)?;
    }
    summary.output_samples = current.len();
    Ok((current, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(points: &[(f64, f64, f64)]) -> Dataset {
        Dataset::new(points.iter().map(|&(f, d, pl)| PathLossSample::bare(f, d, pl).unwrap()).collect()).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let s = PreprocessSettings::default();
        // fspl(28, 1) + 100 = 161.3909
        let out = threshold(&ds(&[(28.0, 50.0, 161.3)]), &s).unwrap();
        assert_eq!((out.dataset.len(), out.removed), (1, 0));
        // fspl(2, 1) + 100 ≈ 138.47
        let out = threshold(&ds(&[(2.0, 50.0, 170.0), (2.0, 60.0, 120.0)]), &s).unwrap();
        assert_eq!((out.dataset.len(), out.removed), (1, 1));
        assert_eq!(out.dataset.samples()[0].distance, 60.0);
        let out = threshold(&Dataset::empty(), &s).unwrap();
        assert!(out.dataset.is_empty());
    }

    #[test]
    fn bin_examples() {
        let s = PreprocessSettings::default();
        let out = bin_by_distance(&ds(&[(28.0, 10.1, 100.0), (28.0, 11.9, 104.0)]), &s).unwrap();
        assert_eq!(out.len(), 1);
        let only = &out.samples()[0];
        assert!((only.distance - 11.0).abs() < 1e-12 && (only.path_loss - 102.0).abs() < 1e-12);

        let out = bin_by_distance(&ds(&[(28.0, 11.9, 100.0), (28.0, 12.1, 104.0)]), &s).unwrap();
        assert_eq!(out.len(), 2);

        let single = ds(&[(28.0, 37.3, 120.0)]);
        assert_eq!(bin_by_distance(&single, &s).unwrap(), single);
    }

    #[test]
    fn different_frequencies_never_merge() {
        let out = bin_by_distance(&ds(&[(28.0, 10.1, 100.0), (73.0, 10.2, 110.0)]), &PreprocessSettings::default()).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn linear_averaging() {
        let s = PreprocessSettings { averaging: Averaging::Linear, ..Default::default() };
        let out = bin_by_distance(&ds(&[(28.0, 10.0, 100.0), (28.0, 11.0, 110.0)]), &s).unwrap();
        // -10·log10((1e-10 + 1e-11)/2)
        let expected = -10.0 * (0.5f64 * (1e-10 + 1e-11)).log10();
        assert!((out.samples()[0].path_loss - expected).abs() < 1e-9);
    }

    #[test]
    fn settings_validation() {
        let bad = PreprocessSettings { bin_width: 0.0, ..Default::default() };
        assert!(matches!(bin_by_distance(&Dataset::empty(), &bad), Err(Error::InvalidSettings(_))));
        let bad = PreprocessSettings { threshold_margin: -1.0, ..Default::default() };
        assert!(threshold(&Dataset::empty(), &bad).is_err());
    }

    #[test]
    fn pipeline_honors_flags() {
        let data = ds(&[(2.0, 10.1, 170.0), (2.0, 10.5, 100.0), (2.0, 11.0, 102.0)]);
        let (out, summary) = preprocess(&data, &PreprocessSettings::default()).unwrap();
        assert_eq!(summary, PreprocessSummary { input_samples: 3, removed_by_threshold: 1, output_samples: 1 });
        assert!((out.samples()[0].path_loss - 101.0).abs() < 1e-12);
        let off = PreprocessSettings { binning_enabled: false, threshold_enabled: false, ..Default::default() };
        assert_eq!(preprocess(&data, &off).unwrap().0, data);
    }

    fn arb_dataset() -> impl Strategy<Value = Dataset> {
        prop::collection::vec((prop::sample::select(vec![2.0, 28.0, 73.0]), 1.0f64..200.0, 60.0f64..200.0), 0..60)
            .prop_map(|pts| ds(&pts))
    }

    proptest! {
        #[test]
        fn binning_conserves_counts_and_is_idempotent(data in arb_dataset(), width in 0.5f64..20.0) {
            let s = PreprocessSettings { bin_width: width, ..Default::default() };
            let once = bin_by_distance(&data, &s).unwrap();
            let mut keys: Vec<(u64, i64)> = data.samples().iter()
                .map(|x| (x.frequency.to_bits(), (x.distance / width).floor() as i64)).collect();
            keys.sort();
            keys.dedup();
            prop_assert_eq!(once.len(), keys.len());
            let twice = bin_by_distance(&once, &s).unwrap();
            prop_assert_eq!(twice, once);
        }

        #[test]
        fn threshold_is_monotone_in_margin(data in arb_dataset(), m1 in 1.0f64..150.0, extra in 0.0f64..50.0) {
            let lo = PreprocessSettings { threshold_margin: m1, ..Default::default() };
            let hi = PreprocessSettings { threshold_margin: m1 + extra, ..Default::default() };
            prop_assert!(threshold(&data, &hi).unwrap().removed <= threshold(&data, &lo).unwrap().removed);
        }
    }
}
