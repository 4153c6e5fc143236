//! Closed-form minimum shadow fading estimators.
//!
//! Every fitter minimizes `σ = sqrt(Σχ²/N)`, the RMS of the residuals about
//! the mean model, by zeroing the partial derivatives of `Σχ²`. The sums
//! are taken over a [`RegressionDesign`] built once from the dataset:
//!
//! | symbol | meaning                         |
//! |--------|---------------------------------|
//! | `A`    | `PL − FSPL(f, 1 m)`             |
//! | `B`    | `PL`                            |
//! | `D`    | `10·log10(d)`                   |
//! | `F`    | `10·log10(f)`                   |
//! | `f`    | carrier frequency, GHz          |

use serde::{Deserialize, Serialize};

use crate::domain::{
    fspl, weighted_mean_frequency, Dataset, FitFlag, FitReport, ModelKind, ModelParams,
};
use crate::error::{Error, Result};

/// Per-sample regressors shared by all closed-form fitters.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDesign {
    /// `A`: excess loss over the 1 m free space loss, dB.
    pub excess_loss: Vec<f64>,
    /// `B`: total path loss, dB.
    pub path_loss: Vec<f64>,
    /// `D = 10·log10(d)`.
    pub log_distance: Vec<f64>,
    /// `F = 10·log10(f)`.
    pub log_frequency: Vec<f64>,
    /// `f`, GHz.
    pub frequency: Vec<f64>,
}

impl RegressionDesign {
    pub fn from_dataset(ds: &Dataset) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = ds.len();
        let mut design = RegressionDesign {
            excess_loss: Vec::with_capacity(n),
            path_loss: Vec::with_capacity(n),
            log_distance: Vec::with_capacity(n),
            log_frequency: Vec::with_capacity(n),
            frequency: Vec::with_capacity(n),
        };
        for s in ds.samples() {
            design.excess_loss.push(s.path_loss - fspl(s.frequency, 1.0)?);
            design.path_loss.push(s.path_loss);
            design.log_distance.push(10.0 * s.distance.log10());
            design.log_frequency.push(10.0 * s.frequency.log10());
            design.frequency.push(s.frequency);
        }
        Ok(design)
    }

    pub fn len(&self) -> usize {
        self.path_loss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path_loss.is_empty()
    }

    fn sum(&self, term: impl Fn(usize) -> f64) -> f64 {
        (0..self.len()).map(term).sum()
    }
}

/// Allowed range of the optimized reference distance, m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct D0Bounds {
    pub min: f64,
    pub max: f64,
}

impl Default for D0Bounds {
    fn default() -> Self {
        D0Bounds { min: 0.1, max: 50.0 }
    }
}

impl D0Bounds {
    pub fn validate(&self) -> Result<()> {
        if self.min > 0.0 && self.max >= self.min && self.max.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidSettings(format!(
                "d0 bounds must satisfy 0 < min ≤ max, got [{}, {}]",
                self.min, self.max
            )))
        }
    }
}

/// How the CIF reference frequency is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F0Choice {
    /// Sample-count weighted mean frequency rounded to integer GHz.
    #[default]
    Auto,
    Fixed(f64),
}

impl F0Choice {
    pub fn resolve(self, ds: &Dataset) -> Result<f64> {
        match self {
            F0Choice::Auto => weighted_mean_frequency(ds),
            F0Choice::Fixed(f0) if f0 > 0.0 && f0.is_finite() => Ok(f0),
            F0Choice::Fixed(f0) => Err(Error::Domain(format!("f0 must be > 0 GHz, got {f0}"))),
        }
    }

    fn describe(self, f0: f64) -> String {
        match self {
            F0Choice::Auto => format!("weighted mean frequency, rounded: {f0} GHz"),
            F0Choice::Fixed(_) => format!("fixed by caller: {f0} GHz"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CifOptions {
    pub f0: F0Choice,
    /// Fit single-frequency data as CI (b reported as 0) instead of rejecting it.
    pub allow_single_frequency: bool,
}

/// Options for [`fit`], covering every model family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    pub d0_bounds: D0Bounds,
    pub f0: F0Choice,
}

/// Relative singularity test: `|det| < 1e-12 · Π|diag|`.
pub fn is_singular(det: f64, diagonal: &[f64]) -> bool {
    let scale: f64 = diagonal.iter().map(|d| d.abs()).product();
    !det.is_finite() || det.abs() < 1e-12 * scale
}

fn require_distinct_distances(ds: &Dataset, model: &str) -> Result<()> {
    if ds.distinct_distances() < 2 {
        return Err(Error::DegenerateDesign(format!(
            "{model} needs at least two distinct distances"
        )));
    }
    Ok(())
}

/// CI with a 1 m reference: `n = ΣDA / ΣD²`.
pub fn fit_ci(ds: &Dataset) -> Result<FitReport> {
    let x = RegressionDesign::from_dataset(ds)?;
    let sdd = x.sum(|i| x.log_distance[i] * x.log_distance[i]);
    if sdd <= 0.0 {
        return Err(Error::DegenerateDesign(
            "CI needs at least one sample beyond 1 m (all distances are 1 m)".into(),
        ));
    }
    let sda = x.sum(|i| x.log_distance[i] * x.excess_loss[i]);
    let n = sda / sdd;
    let residuals = (0..x.len()).map(|i| x.excess_loss[i] - n * x.log_distance[i]).collect();
    Ok(FitReport::new(ModelParams::Ci { n }, residuals))
}

/// CI about a fixed reference distance `d0`.
///
/// With `A' = PL − FSPL(f, d0)` and `D' = 10·log10(d/d0)`, `n = ΣD'A'/ΣD'²`.
pub fn fit_ci_fixed_d0(ds: &Dataset, d0: f64) -> Result<FitReport> {
    if !(d0 > 0.0) || !d0.is_finite() {
        return Err(Error::Domain(format!("d0 must be > 0 m, got {d0}")));
    }
    let x = RegressionDesign::from_dataset(ds)?;
    let (n, residuals) = ci_about_reference(&x, 10.0 * d0.log10())?;
    Ok(FitReport::new(ModelParams::CiOpt { n, d0 }, residuals))
}

/// `ref_db = 10·log10(d0)`; the free space term at d0 is `FSPL(f,1) + 2·ref_db`.
fn ci_about_reference(x: &RegressionDesign, ref_db: f64) -> Result<(f64, Vec<f64>)> {
    let (mut sdd, mut sda) = (0.0, 0.0);
    for i in 0..x.len() {
        let dd = x.log_distance[i] - ref_db;
        sdd += dd * dd;
        sda += dd * (x.excess_loss[i] - 2.0 * ref_db);
    }
    if sdd <= 0.0 {
        return Err(Error::DegenerateDesign("every distance equals the reference distance".into()));
    }
    let n = sda / sdd;
    let residuals = (0..x.len())
        .map(|i| x.excess_loss[i] - 2.0 * ref_db - n * (x.log_distance[i] - ref_db))
        .collect();
    Ok((n, residuals))
}

/// CI with a jointly optimized reference distance, constrained to `bounds`.
///
/// The unconstrained solution regresses `A` on `D` with an intercept
/// `b = (2 − n)·10·log10(d0)`. If the implied d0 leaves the bounds, the
/// profile σ is evaluated at both bounds (with n refitted about each) and
/// the smaller wins. At `n ≈ 2` d0 cannot be identified and the 1 m CI
/// fit is returned with [`FitFlag::D0Unidentifiable`].
pub fn fit_ci_opt(ds: &Dataset, bounds: D0Bounds) -> Result<FitReport> {
    bounds.validate()?;
    let x = RegressionDesign::from_dataset(ds)?;
    require_distinct_distances(ds, "CIOpt")?;

    let len = x.len() as f64;
    let sa = x.sum(|i| x.excess_loss[i]);
    let sd = x.sum(|i| x.log_distance[i]);
    let sdd = x.sum(|i| x.log_distance[i] * x.log_distance[i]);
    let sda = x.sum(|i| x.log_distance[i] * x.excess_loss[i]);

    let det = len * sdd - sd * sd;
    if is_singular(det, &[len, sdd]) {
        return Err(Error::Singular("CIOpt distance regressor has no spread".into()));
    }
    let n = (sa * sd - len * sda) / (sd * sd - len * sdd);
    let intercept = (sa - n * sd) / len;

    let settings_bounds = Some([bounds.min, bounds.max]);
    if (2.0 - n).abs() < 1e-6 {
        let (n, residuals) = ci_about_reference(&x, 0.0)?;
        let mut report =
            FitReport::new(ModelParams::CiOpt { n, d0: 1.0 }, residuals).with_flag(FitFlag::D0Unidentifiable);
        report.settings.d0_bounds = settings_bounds;
        return Ok(report);
    }

    let ref_db = intercept / (2.0 - n);
    let d0 = 10f64.powf(ref_db / 10.0);
    let mut report = if d0 >= bounds.min && d0 <= bounds.max {
        let residuals = (0..x.len()).map(|i| x.excess_loss[i] - n * x.log_distance[i] - intercept).collect();
        FitReport::new(ModelParams::CiOpt { n, d0 }, residuals)
    } else {
        let lo_db = 10.0 * bounds.min.log10();
        let hi_db = 10.0 * bounds.max.log10();
        let (n_lo, r_lo) = ci_about_reference(&x, lo_db)?;
        let (n_hi, r_hi) = ci_about_reference(&x, hi_db)?;
        let lo = FitReport::new(ModelParams::CiOpt { n: n_lo, d0: bounds.min }, r_lo);
        let hi = FitReport::new(ModelParams::CiOpt { n: n_hi, d0: bounds.max }, r_hi);
        let prefer_hi = ref_db > hi_db;
        let best = if lo.sigma < hi.sigma || (lo.sigma == hi.sigma && !prefer_hi) { lo } else { hi };
        best.with_flag(FitFlag::D0AtBound { unconstrained_d0: d0 })
    };
    report.settings.d0_bounds = settings_bounds;
    Ok(report)
}

/// ABG with all three coefficients free.
pub fn fit_abg(ds: &Dataset) -> Result<FitReport> {
    let x = RegressionDesign::from_dataset(ds)?;
    if ds.distinct_frequencies() < 2 {
        return Err(Error::SingleFrequency {
            model: "ABG",
            fallback: "AB (γ fixed at 2)",
            found: ds.distinct_frequencies(),
        });
    }
    require_distinct_distances(ds, "ABG")?;

    let (dd, ff, bb) = (&x.log_distance, &x.log_frequency, &x.path_loss);
    let len = x.len() as f64;
    let sd = x.sum(|i| dd[i]);
    let sf = x.sum(|i| ff[i]);
    let sb = x.sum(|i| bb[i]);
    let sdd = x.sum(|i| dd[i] * dd[i]);
    let sff = x.sum(|i| ff[i] * ff[i]);
    let sdf = x.sum(|i| dd[i] * ff[i]);
    let sdb = x.sum(|i| dd[i] * bb[i]);
    let sfb = x.sum(|i| ff[i] * bb[i]);

    // normal matrix [[ΣD², ΣD, ΣDF], [ΣD, N, ΣF], [ΣDF, ΣF, ΣF²]]
    let det = sdd * (len * sff - sf * sf) - sd * (sd * sff - sf * sdf) + sdf * (sd * sf - len * sdf);
    if is_singular(det, &[sdd, len, sff]) {
        return Err(Error::Singular("ABG distance and frequency regressors are collinear".into()));
    }

    let dist_spread = sd * sd - len * sdd;
    let freq_spread = sf * sf - len * sff;
    let cross = sd * sf - len * sdf;
    let alpha = ((sd * sb - len * sdb) * freq_spread - cross * (sf * sb - len * sfb))
        / (dist_spread * freq_spread - cross * cross);
    let beta = ((sd * sfb - sb * sdf) * (sf * sdd - sd * sdf) - (sb * sdd - sd * sdb) * (sd * sff - sf * sdf))
        / (dist_spread * (sd * sff - sf * sdf) + cross * (sf * sdd - sd * sdf));
    let gamma = ((sf * sb - len * sfb) * dist_spread - cross * (sd * sb - len * sdb))
        / (freq_spread * dist_spread - cross * cross);

    let residuals = (0..x.len()).map(|i| bb[i] - alpha * dd[i] - beta - gamma * ff[i]).collect();
    Ok(FitReport::new(ModelParams::Abg { alpha, beta, gamma }, residuals))
}

/// ABG with γ held at `gamma`; α and β solve the two remaining normal equations.
pub fn fit_abg_fixed_gamma(ds: &Dataset, gamma: f64) -> Result<FitReport> {
    let x = RegressionDesign::from_dataset(ds)?;
    require_distinct_distances(ds, "ABG")?;
    let (dd, ff, bb) = (&x.log_distance, &x.log_frequency, &x.path_loss);
    let len = x.len() as f64;
    let sd = x.sum(|i| dd[i]);
    let sdd = x.sum(|i| dd[i] * dd[i]);
    let sdy = x.sum(|i| dd[i] * (bb[i] - gamma * ff[i]));
    let sy = x.sum(|i| bb[i] - gamma * ff[i]);

    let det = sdd * len - sd * sd;
    if is_singular(det, &[sdd, len]) {
        return Err(Error::Singular("distance regressor has no spread".into()));
    }
    let alpha = (sdy * len - sd * sy) / det;
    let beta = (sdd * sy - sd * sdy) / det;
    let residuals = (0..x.len()).map(|i| bb[i] - alpha * dd[i] - beta - gamma * ff[i]).collect();
    Ok(FitReport::new(ModelParams::Abg { alpha, beta, gamma }, residuals))
}

/// AB: ABG with γ = 2, i.e. ordinary least squares of `B − 2F` on `D`.
pub fn fit_ab(ds: &Dataset) -> Result<FitReport> {
    let x = RegressionDesign::from_dataset(ds)?;
    require_distinct_distances(ds, "AB")?;
    let gamma = ModelParams::AB_GAMMA;
    let y: Vec<f64> = (0..x.len()).map(|i| x.path_loss[i] - gamma * x.log_frequency[i]).collect();
    let len = x.len() as f64;
    let mean_d = x.log_distance.iter().sum::<f64>() / len;
    let mean_y = y.iter().sum::<f64>() / len;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (d, v) in x.log_distance.iter().zip(&y) {
        sxx += (d - mean_d) * (d - mean_d);
        sxy += (d - mean_d) * (v - mean_y);
    }
    if is_singular(sxx, &[x.log_distance.iter().map(|d| d * d).sum::<f64>()]) {
        return Err(Error::Singular("distance regressor has no spread".into()));
    }
    let alpha = sxy / sxx;
    let beta = mean_y - alpha * mean_d;
    let residuals = (0..x.len()).map(|i| y[i] - alpha * x.log_distance[i] - beta).collect();
    Ok(FitReport::new(ModelParams::Ab { alpha, beta }, residuals))
}

/// Linear-frequency exponent coefficients `a = n(1 − b)` and `g = nb/f0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CifCoefficients {
    pub a: f64,
    pub g: f64,
}

impl CifCoefficients {
    /// Splits `a + g·f` into `(n, b)` about a chosen `f0`.
    pub fn to_params(self, f0: f64) -> Result<ModelParams> {
        let n = self.a + self.g * f0;
        if n.abs() < 1e-12 || !n.is_finite() {
            return Err(Error::Undefined(format!("CIF exponent n = {n} at f0 = {f0} GHz, so b is undefined")));
        }
        Ok(ModelParams::Cif { n, b: self.g * f0 / n, f0 })
    }
}

/// Solves the two CIF normal equations for `(a, g)`.
pub fn cif_coefficients(x: &RegressionDesign) -> Result<CifCoefficients> {
    let (dd, aa, f) = (&x.log_distance, &x.excess_loss, &x.frequency);
    let s_dd = x.sum(|i| dd[i] * dd[i]);
    let s_ddf = x.sum(|i| dd[i] * dd[i] * f[i]);
    let s_ddff = x.sum(|i| dd[i] * dd[i] * f[i] * f[i]);
    let s_da = x.sum(|i| dd[i] * aa[i]);
    let s_daf = x.sum(|i| dd[i] * aa[i] * f[i]);

    let det = s_dd * s_ddff - s_ddf * s_ddf;
    if is_singular(det, &[s_dd, s_ddff]) {
        return Err(Error::Singular(
            "CIF regressors D and D·f are collinear (one frequency, or all distances 1 m)".into(),
        ));
    }
    let denom = s_ddf * s_ddf - s_dd * s_ddff;
    let a = (s_ddf * s_daf - s_ddff * s_da) / denom;
    let g = (s_ddf * s_da - s_dd * s_daf) / denom;
    Ok(CifCoefficients { a, g })
}

/// CIF with `f0` chosen per `f0`.
pub fn fit_cif(ds: &Dataset, f0: F0Choice) -> Result<FitReport> {
    fit_cif_with(ds, CifOptions { f0, allow_single_frequency: false })
}

pub fn fit_cif_with(ds: &Dataset, options: CifOptions) -> Result<FitReport> {
    let x = RegressionDesign::from_dataset(ds)?;
    let f0 = options.f0.resolve(ds)?;

    let mut report = if ds.distinct_frequencies() < 2 {
        if !options.allow_single_frequency {
            return Err(Error::SingleFrequency {
                model: "CIF",
                fallback: "CI",
                found: ds.distinct_frequencies(),
            });
        }
        // Only n·(1 + b(f − f0)/f0) at the one frequency is identifiable.
        // Reporting b = 0 makes the fit identical to CI.
        let ci = fit_ci(ds)?;
        let ModelParams::Ci { n } = ci.params else { unreachable!() };
        FitReport::new(ModelParams::Cif { n, b: 0.0, f0 }, ci.residuals).with_flag(FitFlag::CifRevertedToCi)
    } else {
        let coef = cif_coefficients(&x)?;
        let params = coef.to_params(f0)?;
        let residuals = (0..x.len())
            .map(|i| x.excess_loss[i] - x.log_distance[i] * (coef.a + coef.g * x.frequency[i]))
            .collect();
        FitReport::new(params, residuals)
    };
    report.settings.f0_rule = Some(options.f0.describe(f0));
    Ok(report)
}

/// Fits one model family with no substitutions.
pub fn fit(ds: &Dataset, kind: ModelKind, options: &FitOptions) -> Result<FitReport> {
    match kind {
        ModelKind::Abg => fit_abg(ds),
        ModelKind::Ab => fit_ab(ds),
        ModelKind::Ci => fit_ci(ds),
        ModelKind::CiOpt => fit_ci_opt(ds, options.d0_bounds),
        ModelKind::Cif => fit_cif(ds, options.f0),
    }
}

/// Like [`fit`], but single-frequency data degrades ABG to AB and CIF to
/// CI instead of failing; the substitution is recorded as a flag.
pub fn fit_with_reversion(ds: &Dataset, kind: ModelKind, options: &FitOptions) -> Result<FitReport> {
    let single = ds.distinct_frequencies() == 1;
    match kind {
        ModelKind::Abg if single => Ok(fit_ab(ds)?.with_flag(FitFlag::AbSubstitutedForAbg)),
        ModelKind::Cif => fit_cif_with(ds, CifOptions { f0: options.f0, allow_single_frequency: true }),
        _ => fit(ds, kind, options),
    }
}
