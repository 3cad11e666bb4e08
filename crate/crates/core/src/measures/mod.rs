//! Empirical measures on the sphere and the tools that compare them.

mod cloud;
mod dictionary;
mod invariance;
pub mod io;
mod sampling;

pub use cloud::{measure_of_set, ProductCloud, WeightedPointCloud, WEIGHT_SUM_TOL};
pub use dictionary::{Observable, Part, TestDictionary, TestFunction};
pub use invariance::{forward_set_membership, invariance_residual, weak_star_discrepancy};
pub use sampling::{
    estimate_ds_measure, pullback_dirac_exact, pullback_dirac_sampled, sample_annulus_measure,
    sample_circle_measure, DsEstimate, DEFAULT_START, WALKS_PER_STREAM, WALK_RETRIES,
};
