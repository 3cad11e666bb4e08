//! Correlations for product correspondences `F₁ × F₂`.

use super::correlation::CorrelationSeries;
use super::koopman::{EvalMode, KoopmanConfig};
use crate::corr::{PointPair, ProductCorrespondence};
use crate::error::{Error, Result};
use crate::exec;
use crate::measures::{Observable, ProductCloud, WALK_RETRIES};
use crate::numerics::seeded_stream;

/// A real function on the product of two spheres.
pub trait PairObservable: Sync {
    fn eval_pair(&self, p: PointPair) -> f64;
}

impl<F> PairObservable for F
where
    F: Fn(PointPair) -> f64 + Sync,
{
    fn eval_pair(&self, p: PointPair) -> f64 {
        self(p)
    }
}

/// `φ₁ * φ₂ : (z₁, z₂) ↦ φ₁(z₁) φ₂(z₂)`.
pub struct Separable<'a>(pub &'a dyn Observable, pub &'a dyn Observable);

impl PairObservable for Separable<'_> {
    fn eval_pair(&self, (a, b): PointPair) -> f64 {
        self.0.eval(a) * self.1.eval(b)
    }
}

/// `(U_{F₁×F₂}ʲ φ)(p)` for `j = 0..=n_max`, with standard errors.
pub fn product_koopman_series(
    prod: &ProductCorrespondence,
    phi: &dyn PairObservable,
    p: PointPair,
    n_max: usize,
    cfg: &KoopmanConfig,
    stream_id: u64,
) -> Result<Vec<(f64, f64, EvalMode)>> {
    let d = prod.topological_degree();
    let exact_depth = cfg.exact_depth(d, n_max);
    if exact_depth < n_max && !cfg.allow_sampling {
        return Err(Error::TreeTooLarge {
            size: (d as f64).powi(n_max as i32),
            cap: cfg.cap,
        });
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut level = vec![p];
    let mut count = 1.0;
    for j in 0..=exact_depth {
        if j > 0 {
            let mut next = Vec::with_capacity(level.len() * d);
            for &(a, b) in &level {
                next.extend(prod.backward_image(a, b)?);
            }
            level = next;
            count *= d as f64;
        }
        let sum: f64 = level.iter().map(|&q| phi.eval_pair(q)).sum();
        out.push((sum / count, 0.0, EvalMode::Exact));
    }
    if exact_depth < n_max {
        let walks = cfg.walks.max(2);
        let levels = n_max - exact_depth;
        let mut s1 = vec![0.0; levels];
        let mut s2 = vec![0.0; levels];
        let mut rng = seeded_stream(cfg.seed, stream_id);
        for _ in 0..walks {
            let mut last = None;
            let mut path = Vec::with_capacity(n_max);
            'attempt: for _ in 0..WALK_RETRIES {
                path.clear();
                let mut q = p;
                for _ in 0..n_max {
                    match prod.random_preimage(q, &mut rng) {
                        Ok(r) => {
                            q = r;
                            path.push(r);
                        }
                        Err(e) => {
                            last = Some(e);
                            continue 'attempt;
                        }
                    }
                }
                last = None;
                break;
            }
            if let Some(e) = last {
                return Err(Error::SamplingFailed {
                    retries: WALK_RETRIES,
                    last: Box::new(e),
                });
            }
            for (k, &q) in path[exact_depth..].iter().enumerate() {
                let v = phi.eval_pair(q);
                s1[k] += v;
                s2[k] += v * v;
            }
        }
        let nw = walks as f64;
        for k in 0..levels {
            let mean = s1[k] / nw;
            let var = ((s2[k] / nw - mean * mean) * nw / (nw - 1.0)).max(0.0);
            out.push((mean, (var / nw).sqrt(), EvalMode::Sampled { walks }));
        }
    }
    Ok(out)
}

/// `I_j^{F₁×F₂}(φ, ψ)` against a product cloud for `j = 0..=n_max`.
pub fn product_correlation_series(
    prod: &ProductCorrespondence,
    cloud: &ProductCloud,
    phi: &dyn PairObservable,
    psi: &dyn PairObservable,
    n_max: usize,
    cfg: &KoopmanConfig,
) -> Result<CorrelationSeries> {
    let rows = exec::try_map_indexed(cloud.len(), |k| {
        product_koopman_series(prod, phi, cloud.pairs()[k], n_max, cfg, k as u64)
    })?;
    let psi_vals: Vec<f64> = cloud.pairs().iter().map(|&p| psi.eval_pair(p)).collect();
    let n_eff = 1.0 / cloud.weights().iter().map(|w| w * w).sum::<f64>();
    let sampled_from = rows
        .first()
        .and_then(|r| r.iter().position(|v| matches!(v.2, EvalMode::Sampled { .. })));
    let mut values = Vec::with_capacity(n_max + 1);
    let mut stderr = Vec::with_capacity(n_max + 1);
    for j in 0..=n_max {
        let mut mean = 0.0;
        let mut koopman_var = 0.0;
        for ((row, w), s) in rows.iter().zip(cloud.weights()).zip(&psi_vals) {
            mean += w * row[j].0 * s;
            let e = w * s * row[j].1;
            koopman_var += e * e;
        }
        let spread: f64 = rows
            .iter()
            .zip(cloud.weights())
            .zip(&psi_vals)
            .map(|((row, w), s)| {
                let g = row[j].0 * s;
                w * (g - mean) * (g - mean)
            })
            .sum();
        let cloud_var = if n_eff > 1.0 { spread / (n_eff - 1.0) } else { 0.0 };
        values.push(mean);
        stderr.push((koopman_var + cloud_var).sqrt());
    }
    Ok(CorrelationSeries {
        values,
        stderr,
        sampled_from,
    })
}

/// `max_n |I_n^{F₁×F₂} − I_n^{F₁} I_n^{F₂}|` for separable test functions.
pub fn product_correlation_factorization_check(
    left: &CorrelationSeries,
    right: &CorrelationSeries,
    product: &CorrelationSeries,
) -> Result<f64> {
    let n = product.values.len();
    if left.values.len() != n || right.values.len() != n {
        return Err(Error::InvalidArgument(format!(
            "horizons differ: left {}, right {}, product {}",
            left.values.len(),
            right.values.len(),
            n
        )));
    }
    Ok((0..n)
        .map(|j| (product.values[j] - left.values[j] * right.values[j]).abs())
        .fold(0.0, f64::max))
}
