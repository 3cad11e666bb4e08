use rand::Rng;

use super::correspondence::PolyCorrespondence;
use crate::error::Result;
use crate::numerics::SpherePoint;

pub type PointPair = (SpherePoint, SpherePoint);

/// `F₁ × F₂` acting coordinatewise on the product of two spheres.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCorrespondence {
    left: PolyCorrespondence,
    right: PolyCorrespondence,
}

/// Pairs two correspondences; `product(f, f)` is the self-product `F^×`.
pub fn product(left: &PolyCorrespondence, right: &PolyCorrespondence) -> ProductCorrespondence {
    ProductCorrespondence {
        left: left.clone(),
        right: right.clone(),
    }
}

impl ProductCorrespondence {
    pub fn left(&self) -> &PolyCorrespondence {
        &self.left
    }

    pub fn right(&self) -> &PolyCorrespondence {
        &self.right
    }

    pub fn topological_degree(&self) -> usize {
        self.left.topological_degree() * self.right.topological_degree()
    }

    pub fn forward_degree(&self) -> usize {
        self.left.forward_degree() * self.right.forward_degree()
    }

    /// `(F₁×F₂)†(w₁, w₂) = F₁†(w₁) × F₂†(w₂)`, left index varying slowest.
    pub fn backward_image(&self, w1: SpherePoint, w2: SpherePoint) -> Result<Vec<PointPair>> {
        let a = self.left.backward_image(w1)?;
        let b = self.right.backward_image(w2)?;
        Ok(a.iter()
            .flat_map(|&z1| b.iter().map(move |&z2| (z1, z2)))
            .collect())
    }

    /// A uniformly chosen preimage pair; the coordinates are drawn independently.
    pub fn random_preimage<R: Rng + ?Sized>(&self, w: PointPair, rng: &mut R) -> Result<PointPair> {
        let z1 = self.left.random_preimage(w.0, rng)?;
        let z2 = self.right.random_preimage(w.1, rng)?;
        Ok((z1, z2))
    }
}

/// Free-function form of [`ProductCorrespondence::backward_image`].
pub fn product_backward_image(
    pc: &ProductCorrespondence,
    w1: SpherePoint,
    w2: SpherePoint,
) -> Result<Vec<PointPair>> {
    pc.backward_image(w1, w2)
}
