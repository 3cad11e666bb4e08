use num_complex::Complex64;
use std::fmt;

/// A point of the Riemann sphere: a finite complex number or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(Complex64::new(0.0, 0.0));

    pub fn new(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        SpherePoint::new(x, 0.0)
    }

    /// `r·e^{iθ}`.
    pub fn polar(r: f64, theta: f64) -> Self {
        SpherePoint::Finite(Complex64::from_polar(r, theta))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn value(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// `|z|`, or `+∞` at infinity.
    pub fn modulus(&self) -> f64 {
        match self {
            SpherePoint::Finite(z) => z.norm(),
            SpherePoint::Infinity => f64::INFINITY,
        }
    }

    /// Image under inverse stereographic projection onto the unit sphere in ℝ³,
    /// with infinity at the north pole `(0, 0, 1)`.
    pub fn embedding(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                if r2 > 1e300 {
                    return [0.0, 0.0, 1.0];
                }
                let s = 1.0 + r2;
                [2.0 * z.re / s, 2.0 * z.im / s, (r2 - 1.0) / s]
            }
        }
    }

    /// `1/z` on the sphere.
    pub fn reciprocal(&self) -> SpherePoint {
        match *self {
            SpherePoint::Infinity => SpherePoint::ZERO,
            SpherePoint::Finite(z) if z.re == 0.0 && z.im == 0.0 => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(z.inv()),
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "∞"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// Chordal distance on the sphere, `2|p−q| / √((1+|p|²)(1+|q|²))`.
///
/// Bounded by 2; antipodal points (e.g. 0 and ∞) are at distance exactly 2.
pub fn chordal_distance(p: SpherePoint, q: SpherePoint) -> f64 {
    match (p, q) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
            let r = z.norm();
            if r > 1.0 {
                // 2/√(1+r²) written to stay finite for huge r
                2.0 / (r * (1.0 + 1.0 / (r * r)).sqrt())
            } else {
                2.0 / (1.0 + r * r).sqrt()
            }
        }
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            if a.norm() > 1.0 && b.norm() > 1.0 {
                // the map z ↦ 1/z is a chordal isometry
                let (ia, ib) = (a.inv(), b.inv());
                2.0 * (ia - ib).norm()
                    / ((1.0 + ia.norm_sqr()) * (1.0 + ib.norm_sqr())).sqrt()
            } else {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
            }
        }
    }
}
