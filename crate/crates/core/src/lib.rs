//! Fitting, comparison and sensitivity analysis of large-scale path loss
//! models (ABG, AB, CI, CI with optimized d0, and CIF).
//!
//! All fits are closed-form minimum shadow-fading estimators. See
//! [`fitters`] for the estimators and [`sensitivity`] for the
//! measurement/prediction split sweeps.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod fitters;
pub mod ingest;
pub mod oracle;
pub mod preprocess;
pub mod sensitivity;

pub use domain::{
    fspl, weighted_mean_frequency, Dataset, Environment, FitFlag, FitReport, FitSettings, FrequencyCount, ModelKind,
    ModelParams, PathLossSample, Scenario,
};
pub use error::{Error, Result};
pub use fitters::{fit, fit_with_reversion, D0Bounds, F0Choice, FitOptions};
pub use preprocess::{preprocess, PreprocessSettings, PreprocessSummary};
pub use sensitivity::{parameter_trace, prediction_sigma, run_sweep, split, PredictionReport, SplitSpec, SweepPoint, SweepPreset};
