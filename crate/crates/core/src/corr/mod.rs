//! Polynomial correspondences on the Riemann sphere.

mod bivariate;
pub mod catalog;
mod compose;
mod correspondence;
pub mod io;
mod product;

pub use bivariate::BivariatePolynomial;
pub use compose::{compose, compose_with, eliminate_middle, ComposeOptions};
pub use correspondence::{Component, Diagnostic, PolyCorrespondence, PROPORTIONAL_TOL};
pub use product::{product, product_backward_image, PointPair, ProductCorrespondence};
