use super::dictionary::{Observable, TestDictionary};
use crate::error::{Error, Result};
use crate::numerics::SpherePoint;

/// Tolerance on `Σ weights = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Empirical probability measure: points with nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPointCloud {
    points: Vec<SpherePoint>,
    weights: Vec<f64>,
    generator: String,
}

impl WeightedPointCloud {
    pub fn new(points: Vec<SpherePoint>, weights: Vec<f64>) -> Result<Self> {
        validate_weights(points.len(), &weights)?;
        Ok(WeightedPointCloud {
            points,
            weights,
            generator: String::new(),
        })
    }

    /// Equal weights `1/N`.
    pub fn uniform(points: Vec<SpherePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("empty cloud".into()));
        }
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        WeightedPointCloud::new(points, weights)
    }

    /// Free-form provenance string stored with the cloud.
    pub fn with_generator(mut self, generator: impl Into<String>) -> Self {
        self.generator = generator.into();
        self
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpherePoint, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    /// `1 / Σ wᵢ²`, the number of equally weighted points with the same variance.
    pub fn effective_size(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    pub fn integrate(&self, f: &dyn Observable) -> f64 {
        self.iter().map(|(p, w)| w * f.eval(p)).sum()
    }

    /// `∫ φ` for every dictionary member.
    pub fn moments(&self, dict: &TestDictionary) -> Vec<f64> {
        let mut acc = vec![0.0; dict.len()];
        let mut buf = vec![0.0; dict.len()];
        for (p, w) in self.iter() {
            dict.eval_into(p, &mut buf);
            for (a, v) in acc.iter_mut().zip(&buf) {
                *a += w * v;
            }
        }
        acc
    }

    /// Weighted fraction of points satisfying `pred`.
    pub fn measure_of_set<P>(&self, pred: P) -> f64
    where
        P: Fn(SpherePoint) -> bool,
    {
        let selected: Vec<f64> = self.iter().filter(|&(p, _)| pred(p)).map(|(_, w)| w).collect();
        if selected.len() == self.len() {
            // the whole cloud: exactly 1 by normalization
            return 1.0;
        }
        compensated_sum(&selected).clamp(0.0, 1.0)
    }
}

/// Free-function form of [`WeightedPointCloud::measure_of_set`].
pub fn measure_of_set<P>(cloud: &WeightedPointCloud, pred: P) -> f64
where
    P: Fn(SpherePoint) -> bool,
{
    cloud.measure_of_set(pred)
}

fn validate_weights(n: usize, weights: &[f64]) -> Result<()> {
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: weights.len(),
        });
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidMeasure(format!("weight {w} is not a nonnegative number")));
    }
    let total = compensated_sum(weights);
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Neumaier summation.
pub(crate) fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// An empirical measure on the product of two spheres.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCloud {
    pairs: Vec<(SpherePoint, SpherePoint)>,
    weights: Vec<f64>,
}

impl ProductCloud {
    /// All pairs `(aᵢ, bⱼ)` with weight `wᵢ·vⱼ`: the product measure of the
    /// two empirical measures.
    pub fn cartesian(a: &WeightedPointCloud, b: &WeightedPointCloud) -> Self {
        let mut pairs = Vec::with_capacity(a.len() * b.len());
        let mut weights = Vec::with_capacity(a.len() * b.len());
        for (p, wp) in a.iter() {
            for (q, wq) in b.iter() {
                pairs.push((p, q));
                weights.push(wp * wq);
            }
        }
        ProductCloud { pairs, weights }
    }

    pub fn pairs(&self) -> &[(SpherePoint, SpherePoint)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}
