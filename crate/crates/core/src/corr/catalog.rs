//! Ready-made correspondences used throughout the tests and the CLI.

use num_complex::Complex64;

use super::correspondence::PolyCorrespondence;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `w − z`.
pub fn identity() -> PolyCorrespondence {
    PolyCorrespondence::polynomial_map("identity", &[c(0.0), c(1.0)]).expect("valid")
}

/// `w − z²`; its equilibrium measure is arc length on the unit circle.
pub fn squaring() -> PolyCorrespondence {
    PolyCorrespondence::polynomial_map("z^2", &[c(0.0), c(0.0), c(1.0)]).expect("valid")
}

/// `w − zᵏ`.
pub fn power(k: usize) -> PolyCorrespondence {
    let mut coeffs = vec![c(0.0); k + 1];
    coeffs[k] = c(1.0);
    PolyCorrespondence::polynomial_map(format!("z^{k}"), &coeffs).expect("valid")
}

/// `(w − z²) + (w − z²/2)`, the correspondence of the rational semigroup
/// generated by `z²` and `z²/2`. Its preimage measure is the normalized
/// log-Lebesgue measure on the annulus `1 ≤ |z| ≤ 2`.
pub fn semigroup_square_half_square() -> PolyCorrespondence {
    PolyCorrespondence::semigroup(
        "<z^2, z^2/2>",
        &[vec![c(0.0), c(0.0), c(1.0)], vec![c(0.0), c(0.0), c(0.5)]],
    )
    .expect("valid")
}
