use serde::Serialize;

use super::koopman::{koopman_series, EvalMode, KoopmanConfig};
use crate::corr::PolyCorrespondence;
use crate::error::Result;
use crate::exec;
use crate::measures::{Observable, WeightedPointCloud};

/// `(U_Fʲ φᵢ)(z_k)` for every cloud point `k`, observable `i` and level `j`.
#[derive(Clone, Debug)]
pub struct KoopmanTable {
    n_max: usize,
    /// `[point][observable][level]`
    values: Vec<Vec<Vec<f64>>>,
    /// Monte Carlo standard errors, same layout.
    stderr: Vec<Vec<Vec<f64>>>,
    /// First level estimated by sampling, if any.
    sampled_from: Option<usize>,
}

/// Evaluates all Koopman iterates up to `n_max` at every point of `mu`.
///
/// Point `k` uses random stream `k`, so the table is reproducible for a
/// fixed seed regardless of how the points are scheduled.
pub fn koopman_table(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phis: &[&dyn Observable],
    n_max: usize,
    cfg: &KoopmanConfig,
) -> Result<KoopmanTable> {
    let rows = exec::try_map_indexed(mu.len(), |k| {
        koopman_series(corr, phis, mu.points()[k], n_max, cfg, k as u64)
    })?;
    let sampled_from = rows
        .first()
        .and_then(|r| r.first())
        .and_then(|levels| levels.iter().position(|v| matches!(v.mode, EvalMode::Sampled { .. })));
    let values = rows
        .iter()
        .map(|r| r.iter().map(|l| l.iter().map(|v| v.value).collect()).collect())
        .collect();
    let stderr = rows
        .iter()
        .map(|r| r.iter().map(|l| l.iter().map(|v| v.stderr).collect()).collect())
        .collect();
    Ok(KoopmanTable {
        n_max,
        values,
        stderr,
        sampled_from,
    })
}

impl KoopmanTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn sampled_from(&self) -> Option<usize> {
        self.sampled_from
    }

    /// `(U_Fʲ φᵢ)(z_k)`.
    pub fn value(&self, point: usize, observable: usize, level: usize) -> f64 {
        self.values[point][observable][level]
    }

    /// `I_j(φᵢ, ψ) = ∫ (U_Fʲ φᵢ) ψ dμ` for `j = 0..=n_max`, with standard errors
    /// combining the Koopman sampling error and the finite-cloud error.
    pub fn correlations(&self, mu: &WeightedPointCloud, observable: usize, psi: &dyn Observable) -> CorrelationSeries {
        let psi_vals: Vec<f64> = mu.points().iter().map(|&p| psi.eval(p)).collect();
        let n_eff = mu.effective_size();
        let mut values = Vec::with_capacity(self.n_max + 1);
        let mut stderr = Vec::with_capacity(self.n_max + 1);
        for j in 0..=self.n_max {
            let mut mean = 0.0;
            let mut koopman_var = 0.0;
            for (k, w) in mu.weights().iter().enumerate() {
                let g = self.values[k][observable][j] * psi_vals[k];
                mean += w * g;
                let s = w * psi_vals[k] * self.stderr[k][observable][j];
                koopman_var += s * s;
            }
            let spread: f64 = mu
                .weights()
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let g = self.values[k][observable][j] * psi_vals[k];
                    w * (g - mean) * (g - mean)
                })
                .sum();
            let cloud_var = if n_eff > 1.0 { spread / (n_eff - 1.0) } else { 0.0 };
            values.push(mean);
            stderr.push((koopman_var + cloud_var).sqrt());
        }
        CorrelationSeries {
            values,
            stderr,
            sampled_from: self.sampled_from,
        }
    }
}

/// `I_j(φ, ψ)` for `j = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationSeries {
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub sampled_from: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationValue {
    pub value: f64,
    pub stderr: f64,
    pub sampled: bool,
}

/// `I_n(φ, ψ) = ∫ (U_Fⁿ φ) ψ dμ` against the cloud `mu`.
pub fn correlation(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phi: &dyn Observable,
    psi: &dyn Observable,
    n: usize,
    cfg: &KoopmanConfig,
) -> Result<CorrelationValue> {
    let series = correlation_series(corr, mu, phi, psi, n, cfg)?;
    Ok(CorrelationValue {
        value: series.values[n],
        stderr: series.stderr[n],
        sampled: series.sampled_from.is_some_and(|s| s <= n),
    })
}

/// `I_j(φ, ψ)` for all `j ≤ n_max` in one pass.
pub fn correlation_series(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phi: &dyn Observable,
    psi: &dyn Observable,
    n_max: usize,
    cfg: &KoopmanConfig,
) -> Result<CorrelationSeries> {
    let table = koopman_table(corr, mu, &[phi], n_max, cfg)?;
    Ok(table.correlations(mu, 0, psi))
}
