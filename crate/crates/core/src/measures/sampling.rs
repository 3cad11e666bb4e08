//! Preimage measures: exact trees, random backward walks, and the exact
//! samplers for the two worked examples.

use rand::Rng;
use std::f64::consts::{LN_2, TAU};

use super::cloud::WeightedPointCloud;
use super::dictionary::TestDictionary;
use super::invariance::invariance_residual;
use crate::corr::PolyCorrespondence;
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::{chordal_distance, seeded_stream, SpherePoint, Stream};

/// Walks sharing one random stream. Streams are tied to chunks rather than
/// to workers so that output does not depend on the thread count.
pub const WALKS_PER_STREAM: usize = 1024;

/// Attempts per walk before a numeric failure is reported.
pub const WALK_RETRIES: usize = 8;

/// Start point used when none is given.
pub const DEFAULT_START: SpherePoint = SpherePoint::Finite(num_complex::Complex64::new(3.0, 0.0));

/// `(1/dⁿ)(Fⁿ)*δ_z` computed from the full backward tree.
pub fn pullback_dirac_exact(
    corr: &PolyCorrespondence,
    z: SpherePoint,
    n: usize,
    cap: u64,
) -> Result<WeightedPointCloud> {
    let leaves = corr.iterate_backward(z, n, cap)?;
    Ok(WeightedPointCloud::uniform(leaves)?.with_generator(format!(
        "pullback_dirac_exact corr={} start={z} depth={n}",
        corr.label()
    )))
}

/// Endpoint of one length-`n` backward random walk from `z`.
pub(crate) fn backward_walk(
    corr: &PolyCorrespondence,
    z: SpherePoint,
    n: usize,
    rng: &mut Stream,
) -> Result<SpherePoint> {
    let mut last = None;
    for _ in 0..WALK_RETRIES {
        let mut p = z;
        let mut ok = true;
        for _ in 0..n {
            match corr.random_preimage(p, rng) {
                Ok(q) => p = q,
                Err(e) => {
                    last = Some(e);
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(p);
        }
    }
    Err(Error::SamplingFailed {
        retries: WALK_RETRIES,
        last: Box::new(last.expect("at least one failure recorded")),
    })
}

/// Monte Carlo version of [`pullback_dirac_exact`]: `samples` endpoints of
/// independent backward walks, each step uniform over the `d` preimages
/// counted with multiplicity. Unbiased for every integral.
pub fn pullback_dirac_sampled(
    corr: &PolyCorrespondence,
    z: SpherePoint,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<WeightedPointCloud> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let chunks = samples.div_ceil(WALKS_PER_STREAM);
    let parts = exec::try_map_indexed(chunks, |chunk| {
        let mut rng = seeded_stream(seed, chunk as u64);
        let count = WALKS_PER_STREAM.min(samples - chunk * WALKS_PER_STREAM);
        (0..count)
            .map(|_| backward_walk(corr, z, n, &mut rng))
            .collect::<Result<Vec<_>>>()
    })?;
    let points: Vec<SpherePoint> = parts.into_iter().flatten().collect();
    Ok(WeightedPointCloud::uniform(points)?.with_generator(format!(
        "pullback_dirac_sampled corr={} start={z} depth={n} samples={samples} seed={seed}",
        corr.label()
    )))
}

/// An estimate of the equilibrium (preimage) measure `μ_F`.
#[derive(Clone, Debug)]
pub struct DsEstimate {
    pub cloud: WeightedPointCloud,
    /// [`invariance_residual`] of the cloud against the default dictionary.
    pub invariance_residual: f64,
    pub warnings: Vec<String>,
}

/// Chordal radius within which a start point counts as suspicious.
const EXCEPTIONAL_RADIUS: f64 = 1e-9;

/// Backward-walk estimate of `μ_F` at the given depth.
///
/// Starting at a fixed point of a component, at 0 or at ∞ only produces a
/// warning: the exceptional set cannot be computed, and the heuristic list
/// is just a sanity check.
pub fn estimate_ds_measure(
    corr: &PolyCorrespondence,
    start: SpherePoint,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<DsEstimate> {
    let mut warnings = Vec::new();
    if let Some(p) = corr
        .heuristic_exceptional_points()
        .into_iter()
        .find(|&p| chordal_distance(p, start) < EXCEPTIONAL_RADIUS)
    {
        let msg = format!("start point {start} coincides with possibly exceptional point {p}");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let cloud = pullback_dirac_sampled(corr, start, depth, samples, seed)?.with_generator(format!(
        "estimate_ds_measure corr={} start={start} depth={depth} samples={samples} seed={seed}",
        corr.label()
    ));
    let residual = invariance_residual(corr, &cloud, &TestDictionary::default())?;
    Ok(DsEstimate {
        cloud,
        invariance_residual: residual,
        warnings,
    })
}

/// Exact sampler for the normalized log-Lebesgue measure on `1 ≤ |z| ≤ 2`:
/// `e^{x + iθ}` with `x ~ U[0, log 2]`, `θ ~ U[0, 2π)`.
pub fn sample_annulus_measure(samples: usize, seed: u64) -> Result<WeightedPointCloud> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut rng = seeded_stream(seed, 0);
    let points = (0..samples)
        .map(|_| {
            let x = rng.random_range(0.0..LN_2);
            let theta = rng.random_range(0.0..TAU);
            SpherePoint::polar(x.exp(), theta)
        })
        .collect();
    Ok(WeightedPointCloud::uniform(points)?
        .with_generator(format!("sample_annulus_measure samples={samples} seed={seed}")))
}

/// Exact sampler for normalized arc length on the unit circle.
pub fn sample_circle_measure(samples: usize, seed: u64) -> Result<WeightedPointCloud> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut rng = seeded_stream(seed, 0);
    let points = (0..samples)
        .map(|_| SpherePoint::polar(1.0, rng.random_range(0.0..TAU)))
        .collect();
    Ok(WeightedPointCloud::uniform(points)?
        .with_generator(format!("sample_circle_measure samples={samples} seed={seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::catalog;

    #[test]
    fn depth_zero_is_the_dirac_mass() {
        let corr = catalog::squaring();
        let z = SpherePoint::new(0.3, 0.4);
        let exact = pullback_dirac_exact(&corr, z, 0, 1).unwrap();
        assert_eq!(exact.points(), &[z]);
        assert_eq!(exact.weights(), &[1.0]);
        let sampled = pullback_dirac_sampled(&corr, z, 0, 5, 1).unwrap();
        assert!(sampled.points().iter().all(|&p| p == z));
    }

    #[test]
    fn zero_samples_rejected() {
        let corr = catalog::squaring();
        assert!(pullback_dirac_sampled(&corr, SpherePoint::real(2.0), 3, 0, 0).is_err());
        assert!(sample_annulus_measure(0, 0).is_err());
    }

    #[test]
    fn exceptional_start_warns_but_runs() {
        let corr = catalog::squaring();
        let est = estimate_ds_measure(&corr, SpherePoint::ZERO, 3, 16, 0).unwrap();
        assert_eq!(est.warnings.len(), 1);
        assert_eq!(est.cloud.len(), 16);
    }
}
