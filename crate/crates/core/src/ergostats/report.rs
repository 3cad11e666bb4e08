//! Finite-horizon mixing, weak-mixing and ergodicity reports.
//!
//! Limits cannot be observed, so each verdict is a statement about the tail
//! of a finite series at a stated tolerance. The tail is the final third of
//! the horizon. With `e_j = I_j − target` over the tail:
//!
//! * mixing-consistent: `max |e_j| ≤ tol`
//! * weak-mixing-consistent: `mean |e_j| ≤ tol`
//! * ergodic-consistent: `|mean e_j| ≤ tol`
//!
//! so the implications mixing ⇒ weak mixing ⇒ ergodic hold for every report.

use serde::Serialize;

use super::correlation::{koopman_table, CorrelationSeries};
use super::koopman::KoopmanConfig;
use super::sequences::{cesaro, cesaro_abs_dev, density_zero_filter_with, DensityZeroOptions, DensityZeroResult, MIN_FILTER_LEN};
use crate::corr::PolyCorrespondence;
use crate::error::{Error, Result};
use crate::measures::{Observable, WeightedPointCloud};

/// Recorded in every report: only the supplied functions were tested.
pub const SCOPE_NOTE: &str =
    "verdicts cover the supplied test functions only, at the stated horizon and tolerance";

pub const DEFAULT_HORIZON: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReportOptions {
    /// Fixed tolerance; when absent, `tol_multiplier` times the aggregate standard error.
    pub tolerance: Option<f64>,
    pub tol_multiplier: f64,
    /// Smallest tolerance used, so exact computations do not demand bit equality.
    pub tol_floor: f64,
    pub density: DensityZeroOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            tolerance: None,
            tol_multiplier: 3.0,
            tol_floor: 1e-12,
            density: DensityZeroOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    Consistent,
    Inconsistent,
}

impl Consistency {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Consistency::Consistent
        } else {
            Consistency::Inconsistent
        }
    }

    pub fn is_consistent(self) -> bool {
        self == Consistency::Consistent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub mixing: Consistency,
    pub weak_mixing: Consistency,
    pub ergodic: Consistency,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailStatistics {
    /// First index of the tail window.
    pub start: usize,
    pub max_abs_dev: f64,
    pub mean_abs_dev: f64,
    pub mean_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    /// `I_j(φ, ψ)` for `j = 0..=horizon`.
    pub series: Vec<f64>,
    pub stderr: Vec<f64>,
    pub integral_phi: f64,
    pub integral_psi: f64,
    /// `I(φ) I(ψ)`.
    pub target: f64,
    pub target_stderr: f64,
    pub cesaro_means: Vec<f64>,
    pub cesaro_abs_devs: Vec<f64>,
    /// Absent when the horizon is too short for the filter.
    pub density_zero: Option<DensityZeroResult>,
    pub tail: TailStatistics,
    pub horizon: usize,
    pub tolerance: f64,
    /// First level estimated by random walks instead of the exact tree.
    pub sampled_from: Option<usize>,
    pub verdicts: Verdicts,
    pub koopman: KoopmanConfig,
    pub cloud_size: usize,
    pub cloud_generator: String,
    pub scope: String,
}

/// Builds the correlation series of `φ, ψ` against `mu` up to `n_max` and
/// evaluates the three finite-horizon signatures.
pub fn correlation_report(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phi: &dyn Observable,
    psi: &dyn Observable,
    n_max: usize,
    cfg: &KoopmanConfig,
) -> Result<CorrelationReport> {
    correlation_report_with(corr, mu, phi, psi, n_max, cfg, &ReportOptions::default())
}

pub fn correlation_report_with(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phi: &dyn Observable,
    psi: &dyn Observable,
    n_max: usize,
    cfg: &KoopmanConfig,
    opts: &ReportOptions,
) -> Result<CorrelationReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("report horizon must be at least 1".into()));
    }
    let table = koopman_table(corr, mu, &[phi], n_max, cfg)?;
    let series = table.correlations(mu, 0, psi);
    let (integral_phi, se_phi) = mean_and_stderr(mu, phi);
    let (integral_psi, se_psi) = mean_and_stderr(mu, psi);
    let target = integral_phi * integral_psi;
    let target_stderr = (integral_psi * se_phi).hypot(integral_phi * se_psi);
    build_report(series, integral_phi, integral_psi, target, target_stderr, cfg, mu, opts)
}

fn mean_and_stderr(mu: &WeightedPointCloud, f: &dyn Observable) -> (f64, f64) {
    let vals: Vec<f64> = mu.points().iter().map(|&p| f.eval(p)).collect();
    let mean: f64 = vals.iter().zip(mu.weights()).map(|(v, w)| w * v).sum();
    let spread: f64 = vals.iter().zip(mu.weights()).map(|(v, w)| w * (v - mean) * (v - mean)).sum();
    let n_eff = mu.effective_size();
    let se = if n_eff > 1.0 { (spread / (n_eff - 1.0)).sqrt() } else { 0.0 };
    (mean, se)
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    series: CorrelationSeries,
    integral_phi: f64,
    integral_psi: f64,
    target: f64,
    target_stderr: f64,
    cfg: &KoopmanConfig,
    mu: &WeightedPointCloud,
    opts: &ReportOptions,
) -> Result<CorrelationReport> {
    let horizon = series.values.len() - 1;
    let aggregate = series
        .stderr
        .iter()
        .map(|s| s.hypot(target_stderr))
        .fold(0.0, f64::max);
    let tolerance = opts
        .tolerance
        .unwrap_or(opts.tol_multiplier * aggregate)
        .max(opts.tol_floor);
    let tail = tail_statistics(&series.values, target);
    let verdicts = Verdicts {
        mixing: Consistency::from_bool(tail.max_abs_dev <= tolerance),
        weak_mixing: Consistency::from_bool(tail.mean_abs_dev <= tolerance),
        ergodic: Consistency::from_bool(tail.mean_dev.abs() <= tolerance),
    };
    let density_zero = if series.values.len() >= MIN_FILTER_LEN {
        Some(density_zero_filter_with(&series.values, target, tolerance, &opts.density)?)
    } else {
        None
    };
    Ok(CorrelationReport {
        cesaro_means: cesaro(&series.values)?,
        cesaro_abs_devs: cesaro_abs_dev(&series.values, target)?,
        series: series.values,
        stderr: series.stderr,
        integral_phi,
        integral_psi,
        target,
        target_stderr,
        density_zero,
        tail,
        horizon,
        tolerance,
        sampled_from: series.sampled_from,
        verdicts,
        koopman: *cfg,
        cloud_size: mu.len(),
        cloud_generator: mu.generator().to_string(),
        scope: SCOPE_NOTE.to_string(),
    })
}

/// Statistics of `I_j − target` over the final third of the series.
pub fn tail_statistics(series: &[f64], target: f64) -> TailStatistics {
    let n = series.len();
    let start = n - n.div_ceil(3).max(1);
    let tail = &series[start..];
    let len = tail.len() as f64;
    TailStatistics {
        start,
        max_abs_dev: tail.iter().map(|v| (v - target).abs()).fold(0.0, f64::max),
        mean_abs_dev: tail.iter().map(|v| (v - target).abs()).sum::<f64>() / len,
        mean_dev: tail.iter().map(|v| v - target).sum::<f64>() / len,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_is_final_third() {
        let s: Vec<f64> = (0..31).map(f64::from).collect();
        let t = tail_statistics(&s, 0.0);
        assert_eq!(t.start, 20);
        assert_eq!(t.max_abs_dev, 30.0);
        assert_eq!(t.mean_dev, 25.0);
    }

    #[test]
    fn verdicts_are_nested() {
        let s = vec![0.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        let t = tail_statistics(&s, 0.0);
        assert!(t.max_abs_dev >= t.mean_abs_dev && t.mean_abs_dev >= t.mean_dev.abs());
    }
}
