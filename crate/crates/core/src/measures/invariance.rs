use super::cloud::WeightedPointCloud;
use super::dictionary::TestDictionary;
use crate::corr::PolyCorrespondence;
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::SpherePoint;

/// Largest dictionary violation of pullback invariance,
/// `max_φ |∫ (1/d) Σ'_{w ∈ F†(z)} φ(w) dμ(z) − ∫ φ dμ|`.
pub fn invariance_residual(
    corr: &PolyCorrespondence,
    cloud: &WeightedPointCloud,
    dict: &TestDictionary,
) -> Result<f64> {
    let d = corr.topological_degree() as f64;
    let per_point = exec::try_map_indexed(cloud.len(), |k| {
        let z = cloud.points()[k];
        let mut at_z = vec![0.0; dict.len()];
        dict.eval_into(z, &mut at_z);
        let mut pulled = vec![0.0; dict.len()];
        let mut buf = vec![0.0; dict.len()];
        for w in corr.backward_image(z)? {
            dict.eval_into(w, &mut buf);
            for (a, b) in pulled.iter_mut().zip(&buf) {
                *a += b;
            }
        }
        Ok::<_, Error>(pulled
            .iter()
            .zip(&at_z)
            .map(|(p, f)| p / d - f)
            .collect::<Vec<f64>>())
    })?;
    let mut acc = vec![0.0f64; dict.len()];
    for (row, w) in per_point.iter().zip(cloud.weights()) {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += w * v;
        }
    }
    Ok(acc.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// `max_φ |∫ φ da − ∫ φ db|` over the dictionary.
pub fn weak_star_discrepancy(a: &WeightedPointCloud, b: &WeightedPointCloud, dict: &TestDictionary) -> f64 {
    a.moments(dict)
        .iter()
        .zip(b.moments(dict))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Whether `z ∈ Fʲ(A)`, i.e. whether some point of `(Fʲ)†(z)` lies in `A`.
pub fn forward_set_membership<P>(
    corr: &PolyCorrespondence,
    z: SpherePoint,
    j: usize,
    set: &P,
    cap: u64,
) -> Result<bool>
where
    P: Fn(SpherePoint) -> bool + ?Sized,
{
    corr.check_tree(j, cap)?;
    corr.any_backward_leaf(z, j, set)
}
