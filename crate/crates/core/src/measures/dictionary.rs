//! Bounded test functions on the sphere.

use num_complex::Complex64;

use crate::numerics::SpherePoint;

/// A real function on the sphere that can be integrated against clouds.
pub trait Observable: Sync {
    fn eval(&self, p: SpherePoint) -> f64;
}

impl<F> Observable for F
where
    F: Fn(SpherePoint) -> f64 + Sync,
{
    fn eval(&self, p: SpherePoint) -> f64 {
        self(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// The built-in family of test functions. All members are bounded by 1 in
/// absolute value except scaled constants and combinations.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    Constant(f64),
    /// `x₁^a x₂^b x₃^c` in the coordinates of the unit-sphere embedding.
    Stereo([u32; 3]),
    /// Real or imaginary part of `(x₁ + i x₂)ᵏ = (2z / (1 + |z|²))ᵏ`,
    /// which equals `zᵏ` on the unit circle.
    Harmonic { k: u32, part: Part },
    /// Indicator of `inner < |z| ≤ outer`.
    Annulus { inner: f64, outer: f64 },
    /// Indicator of `Re z > threshold` (or `Im z`).
    HalfPlane { part: Part, threshold: f64 },
    /// Linear combination `Σ cᵢ fᵢ`.
    Combination(Vec<(f64, TestFunction)>),
}

impl TestFunction {
    pub fn evaluate(&self, p: SpherePoint) -> f64 {
        match self {
            TestFunction::Constant(c) => *c,
            TestFunction::Stereo([a, b, c]) => {
                let x = p.embedding();
                x[0].powi(*a as i32) * x[1].powi(*b as i32) * x[2].powi(*c as i32)
            }
            TestFunction::Harmonic { k, part } => {
                if *k == 0 {
                    return match part {
                        Part::Re => 1.0,
                        Part::Im => 0.0,
                    };
                }
                let x = p.embedding();
                let v = Complex64::new(x[0], x[1]).powu(*k);
                match part {
                    Part::Re => v.re,
                    Part::Im => v.im,
                }
            }
            TestFunction::Annulus { inner, outer } => match p {
                SpherePoint::Finite(z) => {
                    let r = z.norm();
                    f64::from(u8::from(r > *inner && r <= *outer))
                }
                SpherePoint::Infinity => 0.0,
            },
            TestFunction::HalfPlane { part, threshold } => match p {
                SpherePoint::Finite(z) => {
                    let v = match part {
                        Part::Re => z.re,
                        Part::Im => z.im,
                    };
                    f64::from(u8::from(v > *threshold))
                }
                SpherePoint::Infinity => 0.0,
            },
            TestFunction::Combination(terms) => {
                terms.iter().map(|(c, f)| c * f.evaluate(p)).sum()
            }
        }
    }
}

impl Observable for TestFunction {
    fn eval(&self, p: SpherePoint) -> f64 {
        self.evaluate(p)
    }
}

/// A finite family of test functions standing in for `C(X, ℝ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestDictionary {
    functions: Vec<TestFunction>,
}

impl TestDictionary {
    pub fn new(functions: Vec<TestFunction>) -> Self {
        TestDictionary { functions }
    }

    /// The constant plus every monomial of total degree 1 to 3 in the
    /// embedding coordinates: 20 functions.
    pub fn stereographic_cubic() -> Self {
        let mut functions = vec![TestFunction::Constant(1.0)];
        for total in 1..=3u32 {
            for a in (0..=total).rev() {
                for b in (0..=total - a).rev() {
                    functions.push(TestFunction::Stereo([a, b, total - a - b]));
                }
            }
        }
        TestDictionary { functions }
    }

    pub fn functions(&self) -> &[TestFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Evaluates every member at `p`, appending to `out`.
    pub(crate) fn eval_into(&self, p: SpherePoint, out: &mut [f64]) {
        for (slot, f) in out.iter_mut().zip(&self.functions) {
            *slot = f.evaluate(p);
        }
    }
}

impl Default for TestDictionary {
    fn default() -> Self {
        TestDictionary::stereographic_cubic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_dictionary_has_twenty_members() {
        let d = TestDictionary::default();
        assert_eq!(d.len(), 20);
        let non_constant = d
            .functions()
            .iter()
            .filter(|f| !matches!(f, TestFunction::Constant(_)))
            .count();
        assert_eq!(non_constant, 19);
    }

    #[test]
    fn members_are_bounded() {
        let d = TestDictionary::default();
        for k in 0..200 {
            let p = SpherePoint::polar(0.05 * k as f64, 0.7 * k as f64);
            for f in d.functions() {
                assert!(f.evaluate(p).abs() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn harmonic_is_power_on_circle() {
        let p = SpherePoint::polar(1.0, 0.3);
        let f = TestFunction::Harmonic { k: 3, part: Part::Re };
        assert!((f.evaluate(p) - (0.9f64).cos()).abs() < 1e-14);
        assert_eq!(f.evaluate(SpherePoint::Infinity), 0.0);
    }

    #[test]
    fn indicators() {
        let a = TestFunction::Annulus { inner: 2f64.sqrt(), outer: 2.0 };
        assert_eq!(a.evaluate(SpherePoint::real(1.9)), 1.0);
        assert_eq!(a.evaluate(SpherePoint::real(1.4)), 0.0);
        assert_eq!(a.evaluate(SpherePoint::real(2.0)), 1.0);
        let h = TestFunction::HalfPlane { part: Part::Im, threshold: 0.0 };
        assert_eq!(h.evaluate(SpherePoint::new(5.0, 0.1)), 1.0);
        assert_eq!(h.evaluate(SpherePoint::Infinity), 0.0);
    }
}
