//! Cesàro means and the density-zero exclusion filter.

use serde::Serialize;

use crate::error::{Error, Result};

/// Shortest sequence the density-zero filter accepts.
pub const MIN_FILTER_LEN: usize = 20;

/// Running means `(1/(n+1)) Σ_{j≤n} aⱼ`.
pub fn cesaro(seq: &[f64]) -> Result<Vec<f64>> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument("Cesàro means of an empty sequence".into()));
    }
    let mut sum = 0.0;
    Ok(seq
        .iter()
        .enumerate()
        .map(|(n, a)| {
            sum += a;
            sum / (n + 1) as f64
        })
        .collect())
}

/// Running means of `|aⱼ − target|`.
pub fn cesaro_abs_dev(seq: &[f64], target: f64) -> Result<Vec<f64>> {
    let devs: Vec<f64> = seq.iter().map(|a| (a - target).abs()).collect();
    cesaro(&devs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityZeroOptions {
    /// Largest running density of the excluded set allowed in the trend window.
    pub max_density: f64,
    /// Fraction of the horizon, counted from the end, used for the trend.
    pub trend_fraction: f64,
}

impl Default for DensityZeroOptions {
    fn default() -> Self {
        DensityZeroOptions {
            max_density: 0.2,
            trend_fraction: 1.0 / 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityZeroResult {
    /// Indices `j` with `|aⱼ − target| > window_tol`.
    pub excluded: Vec<usize>,
    /// `|D ∩ [0, n)| / n` at the end of the horizon.
    pub final_density: f64,
    /// Mean of `aⱼ` over the complement of `D`: the filtered limit estimate.
    pub filtered_limit: Option<f64>,
    /// Mean of `|aⱼ − target|` over the complement of `D`.
    pub complement_mean_abs_dev: Option<f64>,
    pub consistent: bool,
}

/// Splits off the indices where the sequence is far from `target` and checks
/// that they look like a density-zero set: over the final stretch of the
/// horizon their running density stays below the threshold and does not
/// grow, and the rest of the sequence is within `window_tol` on average.
pub fn density_zero_filter(seq: &[f64], target: f64, window_tol: f64) -> Result<DensityZeroResult> {
    density_zero_filter_with(seq, target, window_tol, &DensityZeroOptions::default())
}

pub fn density_zero_filter_with(
    seq: &[f64],
    target: f64,
    window_tol: f64,
    opts: &DensityZeroOptions,
) -> Result<DensityZeroResult> {
    if seq.len() < MIN_FILTER_LEN {
        return Err(Error::InvalidArgument(format!(
            "density-zero filter needs at least {MIN_FILTER_LEN} terms, got {}",
            seq.len()
        )));
    }
    if !(window_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("window tolerance must be positive, got {window_tol}")));
    }
    let n = seq.len();
    let excluded: Vec<usize> = (0..n).filter(|&j| (seq[j] - target).abs() > window_tol).collect();

    // running density |D ∩ [0, k)| / k for k = 1..=n
    let mut density = Vec::with_capacity(n);
    let mut count = 0usize;
    let mut next = excluded.iter().peekable();
    for k in 1..=n {
        if next.peek() == Some(&&(k - 1)) {
            count += 1;
            next.next();
        }
        density.push(count as f64 / k as f64);
    }
    let window_start = n - ((n as f64 * opts.trend_fraction).ceil() as usize).clamp(1, n);
    let window = &density[window_start..];
    let below = window.iter().all(|&r| r < opts.max_density);
    let nonincreasing = window.last() <= window.first();

    let kept: Vec<f64> = (0..n)
        .filter(|j| excluded.binary_search(j).is_err())
        .map(|j| seq[j])
        .collect();
    let (filtered_limit, complement_mean_abs_dev) = if kept.is_empty() {
        (None, None)
    } else {
        let len = kept.len() as f64;
        (
            Some(kept.iter().sum::<f64>() / len),
            Some(kept.iter().map(|a| (a - target).abs()).sum::<f64>() / len),
        )
    };
    let consistent = below && nonincreasing && complement_mean_abs_dev.is_some_and(|m| m <= window_tol);
    Ok(DensityZeroResult {
        excluded,
        final_density: density[n - 1],
        filtered_limit,
        complement_mean_abs_dev,
        consistent,
    })
}
