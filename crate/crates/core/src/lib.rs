//! Numerical and exact tools for the ergodic theory of holomorphic
//! correspondences on the Riemann sphere.
//!
//! * [`numerics`]: sphere points, chordal metric, projective root finding.
//! * [`corr`]: polynomial correspondences, preimage trees, composition, products.
//! * [`measures`]: weighted point clouds, pulled-back Dirac masses, invariance residuals.
//! * [`ergostats`]: Koopman operator, correlation sequences, Cesàro and density-zero tools.
//! * [`finite`]: an exact finite-state model where every property is decidable.

pub mod corr;
pub mod ergostats;
pub mod error;
pub mod exec;
pub mod finite;
pub mod measures;
pub mod numerics;

pub use error::{Error, ErrorClass, Result};
pub use numerics::SpherePoint;
