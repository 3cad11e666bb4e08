//! Exact checks of the structural theorems on finite models.

use nalgebra::DVector;
use serde::Serialize;

use super::decide::{
    cesaro_criterion, is_almost_invariant, is_ergodic, is_mixing, is_weak_mixing, matrix_power,
};
use super::model::{kron_product, require_invariant, FiniteCorrespondence, FiniteMeasure};
use crate::error::{Error, Result};

/// `‖(M₁ ⊗ M₂)ⁿ (μ₁ ⊗ μ₂) − (d₁d₂)ⁿ μ₁ ⊗ μ₂‖_∞`.
pub fn check_product_invariance(
    a: &FiniteCorrespondence,
    b: &FiniteCorrespondence,
    mu_a: &FiniteMeasure,
    mu_b: &FiniteMeasure,
    n: u32,
) -> Result<f64> {
    require_invariant(a, mu_a)?;
    require_invariant(b, mu_b)?;
    let prod = kron_product(a, b)?;
    let mu = mu_a.tensor(mu_b);
    let m = prod.to_dmatrix();
    let v = DVector::from_column_slice(mu.values());
    let pushed = matrix_power(&m, u64::from(n)) * &v;
    let scale = f64::from(prod.degree()).powi(n as i32);
    Ok((pushed - v * scale).amax())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremCheck {
    pub weak_mixing: bool,
    pub product_ergodic: bool,
    pub product_weak_mixing: bool,
    pub consistent: bool,
}

/// Weak mixing of `F`, ergodicity of `F × F` and weak mixing of `F × F`
/// with respect to `μ` and `μ ⊗ μ`; consistent when all three agree.
pub fn check_main_theorem(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<MainTheoremCheck> {
    let weak_mixing = is_weak_mixing(fc, mu)?;
    let prod = kron_product(fc, fc)?;
    let mu2 = mu.tensor(mu);
    let product_ergodic = is_ergodic(&prod, &mu2)?;
    let product_weak_mixing = is_weak_mixing(&prod, &mu2)?;
    Ok(MainTheoremCheck {
        weak_mixing,
        product_ergodic,
        product_weak_mixing,
        consistent: weak_mixing == product_ergodic && product_ergodic == product_weak_mixing,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HierarchyCheck {
    pub mixing: bool,
    pub weak_mixing: bool,
    pub ergodic: bool,
    pub consistent: bool,
}

/// Mixing ⇒ weak mixing ⇒ ergodic.
pub fn check_hierarchy(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<HierarchyCheck> {
    let mixing = is_mixing(fc, mu)?;
    let weak_mixing = is_weak_mixing(fc, mu)?;
    let ergodic = is_ergodic(fc, mu)?;
    Ok(HierarchyCheck {
        mixing,
        weak_mixing,
        ergodic,
        consistent: (!mixing || weak_mixing) && (!weak_mixing || ergodic),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AverageMixingCheck {
    pub ergodic: bool,
    pub cesaro: bool,
    pub agree: bool,
}

/// Ergodicity against Cesàro convergence of the indicator correlations.
pub fn check_average_mixing_equivalence(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<AverageMixingCheck> {
    let ergodic = is_ergodic(fc, mu)?;
    let cesaro = cesaro_criterion(fc, mu)?;
    Ok(AverageMixingCheck {
        ergodic,
        cesaro,
        agree: ergodic == cesaro,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetAverage {
    /// `(1/n) Σ_{j<n} μ(Fʲ(A) ∩ B)` for `n = 1..=horizon`.
    pub cesaro: Vec<f64>,
    /// Final Cesàro mean.
    pub limit_estimate: f64,
    /// `μ(A) μ(B)`.
    pub product: f64,
    /// Whether `B` is almost invariant, which guarantees the limit exists.
    pub limit_exists: bool,
}

/// Cesàro means of `μ(Fʲ(A) ∩ B)` with forward images taken set-wise.
pub fn check_set_average_inequality(
    fc: &FiniteCorrespondence,
    mu: &FiniteMeasure,
    a: &[usize],
    b: &[usize],
    horizon: usize,
) -> Result<SetAverage> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let m = fc.m();
    if let Some(&i) = a.iter().chain(b).find(|&&i| i >= m) {
        return Err(Error::InvalidArgument(format!("state {i} out of range")));
    }
    require_invariant(fc, mu)?;
    let mut in_b = vec![false; m];
    b.iter().for_each(|&i| in_b[i] = true);
    let mut current = vec![false; m];
    a.iter().for_each(|&i| current[i] = true);
    let mut sum = 0.0;
    let mut cesaro = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        sum += (0..m).filter(|&i| current[i] && in_b[i]).map(|i| mu.values()[i]).sum::<f64>();
        cesaro.push(sum / n as f64);
        let mut next = vec![false; m];
        for i in (0..m).filter(|&i| current[i]) {
            fc.forward_image(i).into_iter().for_each(|j| next[j] = true);
        }
        current = next;
    }
    Ok(SetAverage {
        limit_estimate: *cesaro.last().expect("horizon is positive"),
        cesaro,
        product: mu.measure(a) * mu.measure(b),
        limit_exists: is_almost_invariant(fc, mu, b)?,
    })
}

/// `max_{j≤n} |I_j^{F₁×F₂}(φ₁*φ₂, ψ₁*ψ₂) − I_j^{F₁}(φ₁, ψ₁) I_j^{F₂}(φ₂, ψ₂)|`.
#[allow(clippy::too_many_arguments)]
pub fn product_correlation_defect(
    a: &FiniteCorrespondence,
    b: &FiniteCorrespondence,
    mu_a: &FiniteMeasure,
    mu_b: &FiniteMeasure,
    phi: (&[f64], &[f64]),
    psi: (&[f64], &[f64]),
    n: u64,
) -> Result<f64> {
    let prod = kron_product(a, b)?;
    let mu = mu_a.tensor(mu_b);
    let tensor = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().flat_map(|u| y.iter().map(move |v| u * v)).collect() };
    let phi_x = tensor(phi.0, phi.1);
    let psi_x = tensor(psi.0, psi.1);
    let mut worst: f64 = 0.0;
    for j in 0..=n {
        let left = super::decide::correlation_exact(a, mu_a, phi.0, psi.0, j)?;
        let right = super::decide::correlation_exact(b, mu_b, phi.1, psi.1, j)?;
        let joint = super::decide::correlation_exact(&prod, &mu, &phi_x, &psi_x, j)?;
        worst = worst.max((joint - left * right).abs());
    }
    Ok(worst)
}
