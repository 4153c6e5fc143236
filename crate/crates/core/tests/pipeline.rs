use pathloss_core::ingest::{generate, read_csv, write_csv, DistanceSampling, SyntheticSpec};
use pathloss_core::{
    fit, preprocess, run_sweep, Environment, FitOptions, FrequencyCount, ModelKind, ModelParams, PreprocessSettings,
    Scenario, SweepPreset,
};

fn campaign(seed: u64, sigma: f64) -> SyntheticSpec {
    SyntheticSpec {
        truth: ModelParams::Ci { n: 2.9 },
        frequencies: [(2.0, 583), (10.0, 581), (18.0, 468), (28.0, 225), (38.0, 12)]
            .iter()
            .map(|&(frequency, count)| FrequencyCount { frequency, count })
            .collect(),
        distance_range: [60.0, 1238.0],
        sampling: DistanceSampling::LogUniform,
        sigma,
        seed,
        scenario: Scenario::UMa,
        environment: Environment::Nlos,
        campaign: "c".into(),
    }
}

fn ci_n(ds: &pathloss_core::Dataset) -> f64 {
    match fit(ds, ModelKind::Ci, &FitOptions::default()).unwrap().params {
        ModelParams::Ci { n } => n,
        _ => unreachable!(),
    }
}

#[test]
fn ci_exponent_is_robust_to_bin_width() {
    let raw = generate(&campaign(3, 5.7)).unwrap();
    let ns: Vec<f64> = [2.0, 5.0, 10.0]
        .iter()
        .map(|&w| ci_n(&preprocess(&raw, &PreprocessSettings { bin_width: w, ..Default::default() }).unwrap().0))
        .collect();
    let spread = ns.iter().cloned().fold(f64::MIN, f64::max) - ns.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 0.1, "{ns:?}");
}

#[test]
fn csv_round_trip_preserves_fits() {
    let raw = generate(&campaign(4, 5.7)).unwrap();
    let mut buf = Vec::new();
    write_csv(&raw, &mut buf).unwrap();
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, raw);
    for kind in ModelKind::ALL {
        let opts = FitOptions::default();
        assert_eq!(fit(&raw, kind, &opts).unwrap(), fit(&back, kind, &opts).unwrap());
    }
}

#[test]
fn every_preset_runs_on_matching_data() {
    let raw = generate(&campaign(5, 5.7)).unwrap();
    for preset in [SweepPreset::UmaClose, SweepPreset::UmaFar, SweepPreset::FrequencyLoo] {
        let report = run_sweep(&raw, &preset.spec(), &[ModelKind::Abg, ModelKind::Ci, ModelKind::Cif], &FitOptions::default()).unwrap();
        assert!(report.points.iter().any(|p| p.skipped.is_none()), "{preset:?}");
    }
    let loo = run_sweep(&raw, &SweepPreset::FrequencyLoo.spec(), &[ModelKind::Ci], &FitOptions::default()).unwrap();
    assert_eq!(loo.points.len(), 5);
}

#[test]
fn heavy_threshold_keeps_only_low_loss_samples() {
    let raw = generate(&campaign(6, 5.7)).unwrap();
    let s = PreprocessSettings { threshold_margin: 60.0, binning_enabled: false, ..Default::default() };
    let (kept, summary) = preprocess(&raw, &s).unwrap();
    assert_eq!(summary.input_samples - summary.removed_by_threshold, kept.len());
    for x in kept.samples() {
        assert!(x.path_loss <= pathloss_core::fspl(x.frequency, 1.0).unwrap() + 60.0);
    }
}
