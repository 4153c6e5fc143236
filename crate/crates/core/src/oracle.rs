//! Brute-force reference fits used to check the closed-form estimators.
//!
//! Nothing here shares code with [`crate::fitters`]: linear models are
//! solved by LU on `XᵀX` assembled row by row from a design matrix, and
//! the close-in models by dense grid search. Intended for tests only and
//! for small datasets (N ≤ ~200).

use nalgebra::{DMatrix, DVector};

use crate::domain::{fspl, weighted_mean_frequency, Dataset, FitReport, ModelKind, ModelParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleSearch {
    /// Generic linear solve of the normal equations (ABG, AB, CI, CIF).
    Linear,
    /// Grid over the CI exponent n.
    Grid { lo: f64, hi: f64, step: f64 },
    /// Grid over d0 for CIOpt, with n solved in closed form at each d0.
    D0Grid { lo: f64, hi: f64, step: f64 },
}

struct Row {
    pl: f64,
    excess: f64,
    log_d: f64,
    log_f: f64,
    f: f64,
}

fn rows(ds: &Dataset) -> Result<Vec<Row>> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    ds.samples()
        .iter()
        .map(|s| {
            Ok(Row {
                pl: s.path_loss,
                excess: s.path_loss - fspl(s.frequency, 1.0)?,
                log_d: 10.0 * s.distance.log10(),
                log_f: 10.0 * s.frequency.log10(),
                f: s.frequency,
            })
        })
        .collect()
}

/// Least squares through the normal equations `XᵀX θ = Xᵀy`.
fn solve_normal(design: &[Vec<f64>], y: &[f64]) -> Result<DVector<f64>> {
    let p = design.first().map_or(0, Vec::len);
    let x = DMatrix::from_fn(design.len(), p, |i, j| design[i][j]);
    let yv = DVector::from_column_slice(y);
    let xtx = x.transpose() * &x;
    let xty = x.transpose() * yv;
    xtx.lu().solve(&xty).ok_or_else(|| Error::Singular("oracle normal matrix is singular".into()))
}

fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) {
        return Err(Error::InvalidSettings(format!("empty grid [{lo}, {hi}] step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

/// CI about a fixed d0 on precomputed rows: `(n, σ)`.
fn profile(rows: &[Row], d0: f64) -> Result<(f64, f64)> {
    let ref_db = 10.0 * d0.log10();
    let (mut num, mut den) = (0.0, 0.0);
    for r in rows {
        // PL − FSPL(f, d0) = excess − 20·log10(d0)
        let x = r.log_d - ref_db;
        let y = r.excess - 2.0 * ref_db;
        num += x * y;
        den += x * x;
    }
    if den == 0.0 {
        return Err(Error::DegenerateDesign("all distances equal d0".into()));
    }
    let n = num / den;
    let ss: f64 = rows.iter().map(|r| (r.excess - 2.0 * ref_db - n * (r.log_d - ref_db)).powi(2)).sum();
    Ok((n, (ss / rows.len() as f64).sqrt()))
}

/// CI about a fixed d0: returns `(n, σ)`.
pub fn ci_profile(ds: &Dataset, d0: f64) -> Result<(f64, f64)> {
    profile(&rows(ds)?, d0)
}

/// Largest σ change between the grid point `d0` and its neighbors.
pub fn grid_cell_sigma_spread(ds: &Dataset, d0: f64, step: f64) -> Result<f64> {
    let (_, center) = ci_profile(ds, d0)?;
    let mut spread: f64 = 0.0;
    for nb in [d0 - step, d0 + step] {
        if nb > 0.0 {
            let (_, s) = ci_profile(ds, nb)?;
            spread = spread.max((s - center).abs());
        }
    }
    Ok(spread)
}

/// CIF `(a, g)` from a generic 2×2 solve.
pub fn cif_coefficients_oracle(ds: &Dataset) -> Result<(f64, f64)> {
    let rows = rows(ds)?;
    let design: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.log_d, r.log_d * r.f]).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.excess).collect();
    let theta = solve_normal(&design, &y)?;
    Ok((theta[0], theta[1]))
}

fn report(ds: &Dataset, params: ModelParams, residual: impl Fn(&Row) -> f64) -> Result<FitReport> {
    let residuals = rows(ds)?.iter().map(residual).collect();
    Ok(FitReport::new(params, residuals))
}

/// Minimizes σ for `kind` by `search`. CIF uses the rounded weighted mean f0.
pub fn oracle_fit(ds: &Dataset, kind: ModelKind, search: OracleSearch) -> Result<FitReport> {
    let data = rows(ds)?;
    match (kind, search) {
        (ModelKind::Abg, OracleSearch::Linear) => {
            let design: Vec<Vec<f64>> = data.iter().map(|r| vec![r.log_d, 1.0, r.log_f]).collect();
            let y: Vec<f64> = data.iter().map(|r| r.pl).collect();
            let t = solve_normal(&design, &y)?;
            let (alpha, beta, gamma) = (t[0], t[1], t[2]);
            report(ds, ModelParams::Abg { alpha, beta, gamma }, |r| r.pl - alpha * r.log_d - beta - gamma * r.log_f)
        }
        (ModelKind::Ab, OracleSearch::Linear) => {
            let design: Vec<Vec<f64>> = data.iter().map(|r| vec![r.log_d, 1.0]).collect();
            let y: Vec<f64> = data.iter().map(|r| r.pl - 2.0 * r.log_f).collect();
            let t = solve_normal(&design, &y)?;
            let (alpha, beta) = (t[0], t[1]);
            report(ds, ModelParams::Ab { alpha, beta }, |r| r.pl - 2.0 * r.log_f - alpha * r.log_d - beta)
        }
        (ModelKind::Ci, OracleSearch::Linear) => {
            let design: Vec<Vec<f64>> = data.iter().map(|r| vec![r.log_d]).collect();
            let y: Vec<f64> = data.iter().map(|r| r.excess).collect();
            let n = solve_normal(&design, &y)?[0];
            report(ds, ModelParams::Ci { n }, |r| r.excess - n * r.log_d)
        }
        (ModelKind::Ci, OracleSearch::Grid { lo, hi, step }) => {
            let mut best: Option<(f64, f64)> = None;
            for n in grid(lo, hi, step)? {
                let ss: f64 = data.iter().map(|r| (r.excess - n * r.log_d).powi(2)).sum();
                if best.is_none_or(|(_, b)| ss < b) {
                    best = Some((n, ss));
                }
            }
            let (n, _) = best.expect("grid is non-empty");
            report(ds, ModelParams::Ci { n }, |r| r.excess - n * r.log_d)
        }
        (ModelKind::CiOpt, OracleSearch::D0Grid { lo, hi, step }) => {
            let mut best: Option<(f64, f64, f64)> = None;
            for d0 in grid(lo, hi, step)? {
                let (n, sigma) = profile(&data, d0)?;
                if best.is_none_or(|(_, _, s)| sigma < s) {
                    best = Some((d0, n, sigma));
                }
            }
            let (d0, n, _) = best.expect("grid is non-empty");
            let ref_db = 10.0 * d0.log10();
            report(ds, ModelParams::CiOpt { n, d0 }, |r| r.excess - 2.0 * ref_db - n * (r.log_d - ref_db))
        }
        (ModelKind::Cif, OracleSearch::Linear) => {
            let (a, g) = cif_coefficients_oracle(ds)?;
            let f0 = weighted_mean_frequency(ds)?;
            let n = a + g * f0;
            report(ds, ModelParams::Cif { n, b: g * f0 / n, f0 }, |r| r.excess - r.log_d * (a + g * r.f))
        }
        (kind, search) => Err(Error::InvalidSettings(format!("oracle does not support {kind} with {search:?}"))),
    }
}
