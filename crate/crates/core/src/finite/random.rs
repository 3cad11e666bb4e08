use rand::seq::IndexedRandom;
use rand::Rng;

use super::model::{invariant_measures, FiniteCorrespondence, FiniteMeasure};
use crate::error::{Error, Result};

/// Attempts before the generator gives up on a parameter choice.
const MAX_ATTEMPTS: usize = 10_000;

/// A random valid correspondence on `2..=m_max` states with degree in
/// `1..=d_max`, together with a full-support invariant measure drawn as a
/// random convex combination of the extreme invariant measures.
///
/// Each column distributes `d` units over uniformly chosen rows; instances
/// with a zero row or with transient states are rejected.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    m_max: usize,
    d_max: u32,
) -> Result<(FiniteCorrespondence, FiniteMeasure)> {
    if m_max < 2 || d_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "need m_max ≥ 2 and d_max ≥ 1, got {m_max} and {d_max}"
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let m = rng.random_range(2..=m_max);
        let d = rng.random_range(1..=d_max);
        let mut matrix = vec![vec![0u32; m]; m];
        for j in 0..m {
            for _ in 0..d {
                matrix[rng.random_range(0..m)][j] += 1;
            }
        }
        let Ok(fc) = FiniteCorrespondence::new(matrix) else {
            continue;
        };
        let extremes = invariant_measures(&fc)?;
        let mut weights: Vec<f64> = extremes.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let mut mu = vec![0.0; m];
        for (w, e) in weights.iter().zip(&extremes) {
            for (x, y) in mu.iter_mut().zip(e.values()) {
                *x += w * y;
            }
        }
        if mu.contains(&0.0) {
            continue;
        }
        return Ok((fc, FiniteMeasure::new(mu)?));
    }
    Err(Error::InvalidArgument("no valid instance found".into()))
}

/// A random state subset (possibly empty).
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<usize> {
    let all: Vec<usize> = (0..m).collect();
    let k = rng.random_range(0..=m);
    let mut s: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
    s.sort_unstable();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::model::invariance_defect;
    use crate::numerics::seeded_stream;

    #[test]
    fn instances_are_valid() {
        let mut rng = seeded_stream(7, 0);
        for _ in 0..50 {
            let (fc, mu) = random_instance(&mut rng, 4, 3).unwrap();
            assert!(mu.values().iter().all(|&x| x > 0.0));
            assert!(invariance_defect(&fc, &mu).unwrap() < 1e-12);
        }
    }
}
