//! Composition of correspondences by eliminating the middle variable.
//!
//! For components `I(z, y)` of the inner and `O(y, w)` of the outer
//! correspondence, the composite component is the Sylvester resultant
//! `R(z, w) = Res_y(I(z, y), O(y, w))`. It is never expanded symbolically:
//! `R` is sampled on a grid of roots of unity, where the 2-D inverse DFT
//! recovers its coefficients exactly up to rounding.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;

use super::bivariate::BivariatePolynomial;
use super::correspondence::{Component, PolyCorrespondence, PROPORTIONAL_TOL};
use crate::error::{Error, Result};
use crate::numerics::seeded_stream;

#[derive(Clone, Copy, Debug)]
pub struct ComposeOptions {
    /// Largest allowed `deg_z + deg_w` of a composite component.
    pub max_total_degree: usize,
    /// Interpolated coefficients below this fraction of the largest are dropped.
    pub trim_tol: f64,
    /// Accepted relative mismatch between the interpolant and a direct
    /// determinant at off-grid probe points.
    pub check_tol: f64,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            max_total_degree: 64,
            trim_tol: 1e-11,
            check_tol: 1e-8,
        }
    }
}

/// `outer ∘ inner`, i.e. `z ↦ outer(inner(z))`, whose backward image is
/// `inner†(outer†(w))`.
pub fn compose(outer: &PolyCorrespondence, inner: &PolyCorrespondence) -> Result<PolyCorrespondence> {
    compose_with(outer, inner, &ComposeOptions::default())
}

pub fn compose_with(
    outer: &PolyCorrespondence,
    inner: &PolyCorrespondence,
    opts: &ComposeOptions,
) -> Result<PolyCorrespondence> {
    let mut merged: Vec<Component> = Vec::new();
    for o in outer.components() {
        for i in inner.components() {
            let poly = eliminate_middle(&i.poly, &o.poly, opts)?;
            let multiplicity = o.multiplicity * i.multiplicity;
            match merged
                .iter_mut()
                .find(|c| c.poly.is_proportional(&poly, PROPORTIONAL_TOL))
            {
                Some(existing) => existing.multiplicity += multiplicity,
                None => merged.push(Component::new(poly, multiplicity)),
            }
        }
    }
    let label = format!("({})∘({})", outer.label(), inner.label());
    Ok(PolyCorrespondence::new(label, merged)?.with_root_options(*outer.root_options()))
}

/// `Res_y(inner(z, y), outer(y, w))` as a bivariate polynomial in `(z, w)`.
pub fn eliminate_middle(
    inner: &BivariatePolynomial,
    outer: &BivariatePolynomial,
    opts: &ComposeOptions,
) -> Result<BivariatePolynomial> {
    let a = inner.deg_w();
    let b = outer.deg_z();
    let deg_z = inner.deg_z() * b;
    let deg_w = outer.deg_w() * a;
    if deg_z + deg_w > opts.max_total_degree {
        return Err(Error::DegreeCap {
            degree: deg_z + deg_w,
            cap: opts.max_total_degree,
        });
    }

    let resultant_at = |z: Complex64, w: Complex64| -> Complex64 {
        let f: Vec<Complex64> = (0..=a)
            .map(|k| (0..=inner.deg_z()).rev().fold(Complex64::new(0.0, 0.0), |acc, i| {
                acc * z + inner.coefficient(i, k)
            }))
            .collect();
        let g: Vec<Complex64> = (0..=b)
            .map(|k| (0..=outer.deg_w()).rev().fold(Complex64::new(0.0, 0.0), |acc, j| {
                acc * w + outer.coefficient(k, j)
            }))
            .collect();
        sylvester(&f, &g).determinant()
    };

    let nz = deg_z + 1;
    let nw = deg_w + 1;
    let zs: Vec<Complex64> = (0..nz).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / nz as f64)).collect();
    let ws: Vec<Complex64> = (0..nw).map(|l| Complex64::from_polar(1.0, TAU * l as f64 / nw as f64)).collect();
    let samples: Vec<Vec<Complex64>> = zs
        .iter()
        .map(|&z| ws.iter().map(|&w| resultant_at(z, w)).collect())
        .collect();
    let sample_scale = samples.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    if sample_scale == 0.0 {
        return Err(Error::InvalidCorrespondence(
            "composition degenerates: components share a common factor in the middle variable".into(),
        ));
    }

    // inverse DFT along w, then along z
    let mut grid = vec![vec![Complex64::new(0.0, 0.0); nw]; nz];
    for p in 0..nz {
        for q in 0..nw {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, row) in samples.iter().enumerate() {
                let zk = Complex64::from_polar(1.0, -TAU * ((p * k) % nz) as f64 / nz as f64);
                for (l, &s) in row.iter().enumerate() {
                    let wl = Complex64::from_polar(1.0, -TAU * ((q * l) % nw) as f64 / nw as f64);
                    acc += s * zk * wl;
                }
            }
            grid[p][q] = acc / (nz * nw) as f64;
        }
    }
    let coeff_scale = grid.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for c in grid.iter_mut().flatten() {
        if c.norm() <= opts.trim_tol * coeff_scale {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let poly = BivariatePolynomial::from_grid(grid);

    // off-grid consistency probes
    let mut rng = seeded_stream(0xc0de, (deg_z * 131 + deg_w) as u64);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let z = Complex64::from_polar(rng.random_range(0.3..1.0), rng.random_range(0.0..TAU));
        let w = Complex64::from_polar(rng.random_range(0.3..1.0), rng.random_range(0.0..TAU));
        let err = (poly.eval(z, w) - resultant_at(z, w)).norm() / sample_scale;
        worst = worst.max(err);
    }
    if !(worst <= opts.check_tol) {
        return Err(Error::Conditioning { estimate: worst });
    }
    Ok(poly)
}

/// Sylvester matrix of `f` (degree `a`) and `g` (degree `b`), ascending coefficients.
fn sylvester(f: &[Complex64], g: &[Complex64]) -> DMatrix<Complex64> {
    let a = f.len() - 1;
    let b = g.len() - 1;
    let n = a + b;
    let mut s = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..b {
        for k in 0..=a {
            s[(r, r + a - k)] = f[k];
        }
    }
    for r in 0..a {
        for k in 0..=b {
            s[(b + r, r + b - k)] = g[k];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn resultant_of_linear_pair() {
        // Res_y(y − z, w − y) is ±(w − z)
        let inner = BivariatePolynomial::from_real_terms(&[(0, 1, 1.0), (1, 0, -1.0)]);
        let outer = BivariatePolynomial::from_real_terms(&[(0, 1, 1.0), (1, 0, -1.0)]);
        let r = eliminate_middle(&inner, &outer, &ComposeOptions::default()).unwrap();
        assert!(r.is_proportional(&inner, 1e-12));
    }

    #[test]
    fn squaring_twice_is_fourth_power() {
        let sq = PolyCorrespondence::polynomial_map("sq", &[real(0.0), real(0.0), real(1.0)]).unwrap();
        let four = compose(&sq, &sq).unwrap();
        let expected = BivariatePolynomial::from_real_terms(&[(0, 1, 1.0), (4, 0, -1.0)]);
        assert_eq!(four.components().len(), 1);
        assert!(four.components()[0].poly.is_proportional(&expected, 1e-10));
        assert_eq!(four.topological_degree(), 4);
    }

    #[test]
    fn degree_cap() {
        let sq = PolyCorrespondence::polynomial_map("sq", &[real(0.0), real(0.0), real(1.0)]).unwrap();
        let opts = ComposeOptions { max_total_degree: 4, ..Default::default() };
        assert!(matches!(compose_with(&sq, &sq, &opts), Err(Error::DegreeCap { .. })));
    }
}
