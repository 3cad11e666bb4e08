//! Complex-analytic utilities: sphere geometry, root finding, multiset
//! matching, random streams.

mod matching;
mod poly;
mod rng;
mod sphere;

pub use matching::multiset_distance;
pub use poly::{expand_roots, poly_roots, ComplexPolynomial, Root, RootOptions};
pub use rng::{seeded_stream, Stream};
pub use sphere::{chordal_distance, SpherePoint};

pub use num_complex::Complex64;
