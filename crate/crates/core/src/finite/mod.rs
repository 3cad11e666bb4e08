//! Correspondences on finite state spaces, where invariance, ergodicity and
//! mixing are all decidable. Used as ground truth for the sphere-side tools.

mod checks;
mod decide;
pub mod io;
mod model;
mod random;

pub use checks::{
    check_average_mixing_equivalence, check_hierarchy, check_main_theorem, check_product_invariance,
    check_set_average_inequality, product_correlation_defect, AverageMixingCheck, HierarchyCheck,
    MainTheoremCheck, SetAverage,
};
pub use decide::{
    cesaro_criterion, correlation_exact, ergodicity_witness, is_almost_invariant, is_ergodic, is_mixing,
    is_weak_mixing, mixing_deciders, set_from_states, states_of_set, weak_mixing_deciders, DeciderPair,
    StateSet, CESARO_TOL, DEFINITIONAL_TOL, ENUMERATION_CAP, HORIZON_LOG2, PERIPHERAL_GAP, WEAK_WINDOW,
};
pub use model::{
    invariance_defect, invariant_measures, koopman_matrix, kron_product, pullback, require_invariant,
    FiniteCorrespondence, FiniteMeasure, INVARIANCE_TOL, KRON_CAP, NORMALIZATION_TOL, STATIONARY_TOL,
};
pub use random::{random_instance, random_subset};
