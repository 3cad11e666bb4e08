//! Exact deciders for almost invariance, ergodicity and (weak) mixing.
//!
//! Mixing and weak mixing are decided twice, once from the spectrum of the
//! Koopman matrix on the support of `μ` and once from the definitions at a
//! very long horizon. Disagreement is reported as an error.

use nalgebra::{Complex, DMatrix};

use super::model::{koopman_matrix, require_invariant, FiniteCorrespondence, FiniteMeasure};
use crate::error::{Error, Result};

/// Largest state space for subset enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// Eigenvalues with modulus at least `1 − PERIPHERAL_GAP` count as peripheral.
pub const PERIPHERAL_GAP: f64 = 1e-8;

/// `log₂` of the horizon used by the definitional deciders.
pub const HORIZON_LOG2: u32 = 40;

/// Steps averaged after the horizon by the weak-mixing decider.
pub const WEAK_WINDOW: usize = 500;

/// Tolerance on correlation defects in the definitional deciders.
pub const DEFINITIONAL_TOL: f64 = 1e-9;

/// Tolerance on Cesàro defects in [`cesaro_criterion`].
pub const CESARO_TOL: f64 = 1e-8;

/// Subset of states as a bit mask.
pub type StateSet = u64;

pub fn set_from_states(states: &[usize]) -> StateSet {
    states.iter().fold(0, |acc, &i| acc | (1 << i))
}

pub fn states_of_set(set: StateSet) -> Vec<usize> {
    (0..64).filter(|i| set & (1 << i) != 0).collect()
}

fn check_bitmask_size(m: usize) -> Result<()> {
    if m > 64 {
        return Err(Error::SizeCap { size: m, cap: 64 });
    }
    Ok(())
}

/// `F†(j)` for every state, as masks.
fn preimage_masks(fc: &FiniteCorrespondence) -> Vec<StateSet> {
    (0..fc.m()).map(|j| set_from_states(&fc.backward_image(j))).collect()
}

fn null_mask(mu: &FiniteMeasure) -> StateSet {
    set_from_states(&(0..mu.len()).filter(|&i| mu.values()[i] == 0.0).collect::<Vec<_>>())
}

fn almost_invariant_mask(pre: &[StateSet], null: StateSet, b: StateSet) -> bool {
    // F† is monotone, so removing every null atom of B gives the smallest
    // admissible B′ and the weakest condition
    let core = b & !null;
    let image = states_of_set(core).into_iter().fold(0, |acc, j| acc | pre[j]);
    image & !b == 0
}

/// Whether some `B′ ⊆ B` with `μ(B′) = μ(B)` has `F†(B′) ⊆ B`.
pub fn is_almost_invariant(fc: &FiniteCorrespondence, mu: &FiniteMeasure, b: &[usize]) -> Result<bool> {
    check_bitmask_size(fc.m())?;
    if mu.len() != fc.m() {
        return Err(Error::DimensionMismatch { expected: fc.m(), got: mu.len() });
    }
    if let Some(&i) = b.iter().find(|&&i| i >= fc.m()) {
        return Err(Error::InvalidArgument(format!("state {i} out of range")));
    }
    Ok(almost_invariant_mask(&preimage_masks(fc), null_mask(mu), set_from_states(b)))
}

/// An almost invariant set of intermediate measure, if there is one.
pub fn ergodicity_witness(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<Option<Vec<usize>>> {
    let m = fc.m();
    if m > ENUMERATION_CAP {
        return Err(Error::SizeCap { size: m, cap: ENUMERATION_CAP });
    }
    if mu.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: mu.len() });
    }
    let pre = preimage_masks(fc);
    let null = null_mask(mu);
    for b in 0..(1u64 << m) {
        if almost_invariant_mask(&pre, null, b) {
            let states = states_of_set(b);
            let measure = mu.measure(&states);
            if measure > 1e-12 && measure < 1.0 - 1e-12 {
                return Ok(Some(states));
            }
        }
    }
    Ok(None)
}

/// Every almost invariant set has measure 0 or 1 (full subset enumeration).
pub fn is_ergodic(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<bool> {
    Ok(ergodicity_witness(fc, mu)?.is_none())
}

/// `I_n(φ, ψ) = Σ_z μ(z) (Aⁿφ)(z) ψ(z)`.
pub fn correlation_exact(
    fc: &FiniteCorrespondence,
    mu: &FiniteMeasure,
    phi: &[f64],
    psi: &[f64],
    n: u64,
) -> Result<f64> {
    let m = fc.m();
    for len in [mu.len(), phi.len(), psi.len()] {
        if len != m {
            return Err(Error::DimensionMismatch { expected: m, got: len });
        }
    }
    require_invariant(fc, mu)?;
    let a = koopman_matrix(fc);
    let v = stochastic_power(&a, n) * nalgebra::DVector::from_column_slice(phi);
    Ok((0..m).map(|z| mu.values()[z] * v[z] * psi[z]).sum())
}

/// `Aⁿ` by repeated squaring.
pub(crate) fn matrix_power(a: &DMatrix<f64>, mut n: u64) -> DMatrix<f64> {
    let mut result = DMatrix::identity(a.nrows(), a.ncols());
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Eigenvalues of `a`. The Schur iteration can stall when several
/// eigenvalues share a modulus (cyclic permutations), so it is bounded and
/// retried on shifted copies `a + sI`, which separate the moduli.
fn spectrum(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    for shift in [0.0, 0.5, 0.3, 1.7] {
        let shifted = a + DMatrix::identity(a.nrows(), a.ncols()) * shift;
        if let Some(schur) = shifted.try_schur(f64::EPSILON, 10_000) {
            return Ok(schur.complex_eigenvalues().iter().map(|l| l - shift).collect());
        }
    }
    Err(Error::NoConvergence { residual: f64::INFINITY })
}

/// Rescales every row to sum to one.
fn renormalize_rows(mut b: DMatrix<f64>) -> DMatrix<f64> {
    for mut row in b.row_iter_mut() {
        let s = row.sum();
        row /= s;
    }
    b
}

/// `Aⁿ` for row-stochastic `A`, renormalizing after every product. Without
/// this a row-sum error `ε` grows like `(1 + ε)ⁿ` over long horizons.
pub(crate) fn stochastic_power(a: &DMatrix<f64>, mut n: u64) -> DMatrix<f64> {
    let mut result = DMatrix::identity(a.nrows(), a.ncols());
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = renormalize_rows(&result * &base);
        }
        n >>= 1;
        if n > 0 {
            base = renormalize_rows(&base * &base);
        }
    }
    result
}

/// The Koopman matrix on the support of `μ`, with the restricted measure.
/// The support of an invariant measure is closed under `F†`, so the
/// restriction is still row-stochastic.
fn restricted(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> (DMatrix<f64>, Vec<f64>) {
    let support = mu.support();
    let a = koopman_matrix(fc);
    let k = support.len();
    let a_s = DMatrix::from_fn(k, k, |i, j| a[(support[i], support[j])]);
    let mu_s = support.iter().map(|&i| mu.values()[i]).collect();
    (a_s, mu_s)
}

/// Largest `μ_j |B[j][i] − μ_i|`: the worst indicator-pair defect
/// `|⟨Bχ_i, χ_j⟩_μ − μ_i μ_j|` when `B` stands in for `Aⁿ`.
fn indicator_defect(b: &DMatrix<f64>, mu: &[f64]) -> f64 {
    let k = mu.len();
    let mut worst: f64 = 0.0;
    for j in 0..k {
        for i in 0..k {
            worst = worst.max(mu[j] * (b[(j, i)] - mu[i]).abs());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeciderPair {
    pub spectral: bool,
    pub definitional: bool,
}

/// Both mixing deciders, without the agreement check.
pub fn mixing_deciders(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<DeciderPair> {
    require_invariant(fc, mu)?;
    let (a, mu_s) = restricted(fc, mu);
    let k = mu_s.len();
    let projector = DMatrix::from_fn(k, k, |_, j| mu_s[j]);
    let radius = spectrum(&(&a - &projector))?
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max);
    let spectral = radius < 1.0 - PERIPHERAL_GAP;
    let power = stochastic_power(&a, 1 << HORIZON_LOG2);
    let definitional = indicator_defect(&power, &mu_s) <= DEFINITIONAL_TOL;
    Ok(DeciderPair { spectral, definitional })
}

/// Both weak-mixing deciders, without the agreement check.
pub fn weak_mixing_deciders(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<DeciderPair> {
    require_invariant(fc, mu)?;
    let (a, mu_s) = restricted(fc, mu);
    let k = mu_s.len();
    let peripheral = spectrum(&a)?
        .iter()
        .filter(|l| l.norm() >= 1.0 - PERIPHERAL_GAP)
        .count();
    let spectral = peripheral == 1;
    // mean over a window of |⟨Aⁿχ_i, χ_j⟩_μ − μ_i μ_j| after a long burn-in
    let mut power = stochastic_power(&a, 1 << HORIZON_LOG2);
    let mut sums = DMatrix::<f64>::zeros(k, k);
    for _ in 0..WEAK_WINDOW {
        for j in 0..k {
            for i in 0..k {
                sums[(j, i)] += mu_s[j] * (power[(j, i)] - mu_s[i]).abs();
            }
        }
        power = renormalize_rows(&power * &a);
    }
    let worst = sums.iter().fold(0.0f64, |acc, s| acc.max(s / WEAK_WINDOW as f64));
    let definitional = worst <= DEFINITIONAL_TOL;
    Ok(DeciderPair { spectral, definitional })
}

fn agree(name: &str, pair: DeciderPair) -> Result<bool> {
    if pair.spectral != pair.definitional {
        return Err(Error::DeciderDisagreement(format!(
            "{name}: spectral test says {}, definitional test says {}",
            pair.spectral, pair.definitional
        )));
    }
    Ok(pair.spectral)
}

pub fn is_mixing(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<bool> {
    agree("mixing", mixing_deciders(fc, mu)?)
}

pub fn is_weak_mixing(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<bool> {
    agree("weak mixing", weak_mixing_deciders(fc, mu)?)
}

/// Whether `(1/n) Σ_{j<n} I_j(χ_a, χ_b) → μ_a μ_b` for every pair of states.
///
/// The Cesàro mean of `Aʲ` is built by doubling,
/// `C_{2H} = (C_H + A^H C_H) / 2`, up to `H = 2^40`, where it is within
/// `O(1/H)` of its limit.
pub fn cesaro_criterion(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<bool> {
    require_invariant(fc, mu)?;
    let (a, mu_s) = restricted(fc, mu);
    let k = mu_s.len();
    let mut mean = DMatrix::identity(k, k);
    let mut power = a.clone();
    for _ in 0..HORIZON_LOG2 {
        mean = renormalize_rows((&mean + &power * &mean) * 0.5);
        power = renormalize_rows(&power * &power);
    }
    Ok(indicator_defect(&mean, &mu_s) <= CESARO_TOL)
}
