//! Univariate complex polynomials and a projective root finder.
//!
//! Roots come from the eigenvalues of a scaled companion matrix, polished by
//! simultaneous Aberth–Ehrlich iteration. Degrees one and two are solved in
//! closed form. Nearby roots are merged into a single root with summed
//! multiplicity, and vanishing leading coefficients become roots at
//! infinity so the count always equals the nominal degree.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::sphere::{chordal_distance, SpherePoint};
use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending degree order.
///
/// The *nominal* degree is `coefficients.len() - 1` regardless of whether the
/// top coefficients vanish; see [`poly_roots`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        ComplexPolynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        ComplexPolynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial `∏ (z − rᵢ)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        ComplexPolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Index of the last coefficient whose modulus exceeds `zero_tol` times
    /// the largest coefficient modulus; `None` for the zero polynomial.
    pub fn degree(&self, zero_tol: f64) -> Option<usize> {
        let scale = self.max_coefficient();
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > zero_tol * scale)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `p(z)` and `p'(z)` in one pass.
fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Normwise backward error `|p(z)| / Σ|cᵢ||z|ⁱ`.
fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut bound = 0.0;
    for c in coeffs.iter().rev() {
        bound = bound * r + c.norm();
    }
    if bound == 0.0 {
        return 0.0;
    }
    horner(coeffs, z).norm() / bound
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub point: SpherePoint,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    /// Accepted normwise backward error of every finite root.
    pub tol: f64,
    /// Roots closer than this in chordal distance are merged.
    pub cluster_radius: f64,
    /// Leading coefficients below `zero_tol · max|cᵢ|` count as zero.
    pub zero_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-10,
            cluster_radius: 1e-7,
            zero_tol: 1e-14,
            max_iter: 80,
        }
    }
}

/// Roots of `p` on the Riemann sphere, counted with multiplicity.
///
/// Exactly `p.nominal_degree()` roots are returned in total; if the top `k`
/// coefficients vanish, infinity is a root of multiplicity `k`.
pub fn poly_roots(p: &ComplexPolynomial, opts: &RootOptions) -> Result<Vec<Root>> {
    let nominal = p.nominal_degree();
    let effective = p.degree(opts.zero_tol).ok_or(Error::IdenticallyZero)?;
    let mut points = Vec::with_capacity(nominal);

    // exact zero roots
    let low = p.coeffs.iter().position(|c| c.re != 0.0 || c.im != 0.0).unwrap_or(0);
    points.extend(std::iter::repeat_n(SpherePoint::ZERO, low));

    let core = &p.coeffs[low..=effective];
    match core.len() - 1 {
        0 => {}
        1 => points.push(SpherePoint::Finite(-core[0] / core[1])),
        2 => {
            let (a, b) = quadratic_roots(core[2], core[1], core[0]);
            points.push(SpherePoint::Finite(a));
            points.push(SpherePoint::Finite(b));
        }
        _ => {
            for z in companion_roots(core, opts)? {
                points.push(SpherePoint::Finite(z));
            }
        }
    }
    points.extend(std::iter::repeat_n(SpherePoint::Infinity, nominal - effective));
    debug_assert_eq!(points.len(), nominal);
    Ok(cluster(&points, opts.cluster_radius))
}

/// Roots of `a z² + b z + c` with `a, c ≠ 0`, avoiding cancellation.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let plus = b + disc;
    let minus = b - disc;
    let q = if plus.norm_sqr() >= minus.norm_sqr() { plus } else { minus } * -0.5;
    if q.norm_sqr() == 0.0 {
        // b = 0 and disc = 0 forces c = 0, excluded by the caller
        let z = Complex64::new(0.0, 0.0);
        return (z, z);
    }
    (q / a, c / q)
}

/// Companion-matrix eigenvalues followed by an Aberth polish.
///
/// `coeffs` has nonzero first and last entries and degree ≥ 3.
fn companion_roots(coeffs: &[Complex64], opts: &RootOptions) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();

    // rescale z = s·u so that the root cloud has size ~1
    let s = (0..n)
        .map(|i| monic[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max);
    let s = if s > 0.0 && s.is_finite() { s } else { 1.0 };
    let scaled: Vec<Complex64> = (0..=n)
        .map(|i| monic[i] / s.powi((n - i) as i32))
        .collect();

    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -scaled[i];
    }
    let eigen = Schur::try_new(companion, f64::EPSILON, 100 * n)
        .and_then(|schur| schur.eigenvalues());
    let mut roots: Vec<Complex64> = match eigen {
        Some(v) => v.iter().copied().collect(),
        None => initial_circle(n),
    };

    aberth_polish(&scaled, &mut roots, opts.max_iter);

    let residual = roots
        .iter()
        .map(|&u| backward_error(&scaled, u))
        .fold(0.0, f64::max);
    if !(residual <= opts.tol) {
        return Err(Error::NoConvergence { residual });
    }
    Ok(roots.into_iter().map(|u| u * s).collect())
}

fn initial_circle(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

/// Simultaneous Aberth–Ehrlich refinement; keeps the best iterate seen.
fn aberth_polish(coeffs: &[Complex64], roots: &mut [Complex64], max_iter: usize) {
    let score = |rs: &[Complex64]| {
        rs.iter()
            .map(|&u| backward_error(coeffs, u))
            .fold(0.0, f64::max)
    };
    let mut best = roots.to_vec();
    let mut best_score = score(roots);
    if best_score <= 4.0 * f64::EPSILON {
        return;
    }
    let mut current = roots.to_vec();
    let mut next = current.clone();
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for k in 0..current.len() {
            let zk = current[k];
            let (p, dp) = horner_with_derivative(coeffs, zk);
            if p.norm_sqr() == 0.0 || dp.norm_sqr() == 0.0 {
                next[k] = zk;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = current
                .iter()
                .enumerate()
                .filter(|&(j, &zj)| j != k && zj != zk)
                .map(|(_, &zj)| (zk - zj).inv())
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm_sqr() > 0.0 { ratio / denom } else { ratio };
            if step.re.is_finite() && step.im.is_finite() {
                next[k] = zk - step;
                max_step = max_step.max(step.norm() / zk.norm().max(1.0));
            } else {
                next[k] = zk;
            }
        }
        std::mem::swap(&mut current, &mut next);
        let s = score(&current);
        if s < best_score {
            best_score = s;
            best.copy_from_slice(&current);
        }
        if max_step <= 4.0 * f64::EPSILON || best_score <= 4.0 * f64::EPSILON {
            break;
        }
    }
    roots.copy_from_slice(&best);
}

/// Greedy chordal clustering; a cluster containing infinity is infinity.
fn cluster(points: &[SpherePoint], radius: f64) -> Vec<Root> {
    struct Acc {
        rep: SpherePoint,
        sum: Complex64,
        finite: usize,
        count: usize,
        infinite: bool,
    }
    let mut clusters: Vec<Acc> = Vec::new();
    for &p in points {
        match clusters
            .iter_mut()
            .find(|c| chordal_distance(c.rep, p) <= radius)
        {
            Some(c) => {
                c.count += 1;
                match p {
                    SpherePoint::Finite(z) => {
                        c.sum += z;
                        c.finite += 1;
                    }
                    SpherePoint::Infinity => c.infinite = true,
                }
            }
            None => clusters.push(Acc {
                rep: p,
                sum: p.value().unwrap_or_default(),
                finite: usize::from(!p.is_infinite()),
                count: 1,
                infinite: p.is_infinite(),
            }),
        }
    }
    clusters
        .into_iter()
        .map(|c| Root {
            point: if c.infinite || c.finite == 0 {
                SpherePoint::Infinity
            } else if c.count == 1 {
                c.rep
            } else {
                SpherePoint::Finite(c.sum / c.finite as f64)
            },
            multiplicity: c.count,
        })
        .collect()
}

/// Repeats every root according to its multiplicity.
pub fn expand_roots(roots: &[Root]) -> Vec<SpherePoint> {
    roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.point, r.multiplicity))
        .collect()
}
