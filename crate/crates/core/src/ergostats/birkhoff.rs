use serde::Serialize;

use super::koopman::{koopman_series, EvalMode, KoopmanConfig};
use crate::corr::PolyCorrespondence;
use crate::error::{Error, Result};
use crate::exec;
use crate::measures::{Observable, WeightedPointCloud};
use crate::numerics::SpherePoint;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirkhoffAverages {
    /// `averages[k-1] = (1/k) Σ_{j<k} (U_Fʲ φ)(z)` for `k = 1..=n`.
    pub averages: Vec<f64>,
    /// Upper bound on the Monte Carlo error of each average.
    pub stderr: Vec<f64>,
    pub sampled_from: Option<usize>,
}

/// The first `n` Birkhoff partial averages of `φ` at `z`.
pub fn birkhoff_average(
    corr: &PolyCorrespondence,
    phi: &dyn Observable,
    z: SpherePoint,
    n: usize,
    cfg: &KoopmanConfig,
) -> Result<BirkhoffAverages> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one Birkhoff average".into()));
    }
    let series = koopman_series(corr, &[phi], z, n - 1, cfg, 0)?.remove(0);
    let sampled_from = series.iter().position(|v| matches!(v.mode, EvalMode::Sampled { .. }));
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut averages = Vec::with_capacity(n);
    let mut stderr = Vec::with_capacity(n);
    for (j, v) in series.iter().enumerate() {
        sum += v.value;
        // levels share walks, so errors are added rather than combined in quadrature
        err += v.stderr;
        averages.push(sum / (j + 1) as f64);
        stderr.push(err / (j + 1) as f64);
    }
    Ok(BirkhoffAverages {
        averages,
        stderr,
        sampled_from,
    })
}

/// `(‖U_F φ‖_q, ‖φ‖_q)` in `L^q` of the cloud.
pub fn contraction_check(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phi: &dyn Observable,
    q: f64,
) -> Result<(f64, f64)> {
    Ok(contraction_check_many(corr, mu, &[phi], &[q])?[0][0])
}

/// [`contraction_check`] for several functions and exponents, indexed
/// `[function][exponent]`. Preimages are computed once per point.
pub fn contraction_check_many(
    corr: &PolyCorrespondence,
    mu: &WeightedPointCloud,
    phis: &[&dyn Observable],
    qs: &[f64],
) -> Result<Vec<Vec<(f64, f64)>>> {
    if let Some(q) = qs.iter().find(|q| !(**q >= 1.0)) {
        return Err(Error::InvalidArgument(format!("exponent q = {q} must be at least 1")));
    }
    // per point: (φᵢ(z), U_F φᵢ(z)) for every i
    let rows = exec::try_map_indexed(mu.len(), |k| {
        let z = mu.points()[k];
        let pre = corr.backward_image(z)?;
        let d = pre.len() as f64;
        Ok::<_, Error>(
            phis.iter()
                .map(|phi| (phi.eval(z), pre.iter().map(|&w| phi.eval(w)).sum::<f64>() / d))
                .collect::<Vec<_>>(),
        )
    })?;
    Ok((0..phis.len())
        .map(|i| {
            qs.iter()
                .map(|&q| {
                    let (mut lhs, mut rhs) = (0.0, 0.0);
                    for (row, w) in rows.iter().zip(mu.weights()) {
                        let (v, u) = row[i];
                        lhs += w * u.abs().powf(q);
                        rhs += w * v.abs().powf(q);
                    }
                    (lhs.powf(1.0 / q), rhs.powf(1.0 / q))
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::catalog;
    use crate::measures::TestFunction;

    #[test]
    fn identity_averages_are_constant() {
        let corr = catalog::identity();
        let phi = TestFunction::Stereo([1, 0, 0]);
        let z = SpherePoint::new(0.4, -0.2);
        let b = birkhoff_average(&corr, &phi, z, 8, &KoopmanConfig::default()).unwrap();
        for a in b.averages {
            assert!((a - phi.evaluate(z)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_small_exponent() {
        let corr = catalog::identity();
        let mu = WeightedPointCloud::uniform(vec![SpherePoint::ZERO]).unwrap();
        assert!(contraction_check(&corr, &mu, &TestFunction::Constant(1.0), 0.5).is_err());
    }
}
