//! Proximal operators for the fusion penalty and the sparsity penalties.
//!
//! The model combines a row-wise fusion term with up to two feature-sparsity
//! terms per view: an *inter*-group term acting on whole centered columns
//! (weighted ℓ2,0 count or group lasso) and an *intra*-group term acting on
//! individual centered entries (ℓ0 count or ℓ1). Every penalty here admits an
//! exact prox: group soft-thresholding for the convex norms and hard
//! thresholding at √(2τ) for the counting norms.
//!
//! Ties sitting exactly on a hard threshold resolve to zero, preferring
//! sparsity; this makes every output deterministic.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::losses::soft_threshold;

/// Inter-group (whole-column) sparsity penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterPenalty {
    GroupL0,
    GroupLasso,
    None,
}

/// Intra-group (per-entry) sparsity penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntraPenalty {
    L0,
    L1,
    None,
}

/// Named penalty family selecting one inter and one intra term.
/// Names appear verbatim in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyFamily {
    GroupL0L0,
    GroupLassoL1,
    GroupL0Only,
    L0Only,
    None,
}

impl PenaltyFamily {
    pub fn inter(self) -> InterPenalty {
        match self {
            PenaltyFamily::GroupL0L0 | PenaltyFamily::GroupL0Only => InterPenalty::GroupL0,
            PenaltyFamily::GroupLassoL1 => InterPenalty::GroupLasso,
            PenaltyFamily::L0Only | PenaltyFamily::None => InterPenalty::None,
        }
    }

    pub fn intra(self) -> IntraPenalty {
        match self {
            PenaltyFamily::GroupL0L0 | PenaltyFamily::L0Only => IntraPenalty::L0,
            PenaltyFamily::GroupLassoL1 => IntraPenalty::L1,
            PenaltyFamily::GroupL0Only | PenaltyFamily::None => IntraPenalty::None,
        }
    }

    /// True when both the inter and intra terms are convex (or absent).
    pub fn is_convex(self) -> bool {
        !matches!(self.inter(), InterPenalty::GroupL0) && !matches!(self.intra(), IntraPenalty::L0)
    }
}

impl std::fmt::Display for PenaltyFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PenaltyFamily::GroupL0L0 => "group_l0_l0",
            PenaltyFamily::GroupLassoL1 => "group_lasso_l1",
            PenaltyFamily::GroupL0Only => "group_l0_only",
            PenaltyFamily::L0Only => "l0_only",
            PenaltyFamily::None => "none",
        };
        write!(f, "{name}")
    }
}

/// Errors from penalty proximal steps.
///
/// A step size of exactly zero is accepted (the prox degenerates to the
/// identity); negative step sizes are rejected.
#[derive(Debug, Error, PartialEq)]
pub enum PenaltyError {
    #[error("prox step size must be nonnegative, got {0}")]
    NonPositiveTau(f64),
    #[error("weight must be strictly positive, got {value} at index {index}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("expected {expected} weights, got {found}")]
    WeightLengthMismatch { expected: usize, found: usize },
}

fn check_tau(tau: f64) -> Result<(), PenaltyError> {
    if tau < 0.0 || tau.is_nan() {
        return Err(PenaltyError::NonPositiveTau(tau));
    }
    Ok(())
}

fn check_weights(weights: &[f64], expected: usize) -> Result<(), PenaltyError> {
    if weights.len() != expected {
        return Err(PenaltyError::WeightLengthMismatch {
            expected,
            found: weights.len(),
        });
    }
    for (index, &value) in weights.iter().enumerate() {
        if value.is_nan() || value <= 0.0 {
            return Err(PenaltyError::NonPositiveWeight { index, value });
        }
    }
    Ok(())
}

fn row_norm(a: &ArrayView2<f64>, i: usize) -> f64 {
    a.row(i).iter().map(|&x| x * x).sum::<f64>().sqrt()
}

fn col_norm(a: &ArrayView2<f64>, j: usize) -> f64 {
    a.column(j).iter().map(|&x| x * x).sum::<f64>().sqrt()
}

/// Group soft-threshold on rows: row ι scales by (1 − τω_ι/max(‖A_ι·‖₂, τω_ι)),
/// becoming exactly zero when ‖A_ι·‖₂ ≤ τω_ι. This is the prox of the
/// weighted sum-of-row-norms fusion penalty.
pub fn prox_fusion_rows(
    a: ArrayView2<f64>,
    omega: &[f64],
    tau: f64,
) -> Result<Array2<f64>, PenaltyError> {
    check_tau(tau)?;
    check_weights(omega, a.nrows())?;
    let mut out = a.to_owned();
    if tau == 0.0 {
        return Ok(out);
    }
    for (i, &w) in omega.iter().enumerate() {
        let threshold = tau * w;
        let norm = row_norm(&a, i);
        if norm <= threshold {
            out.row_mut(i).fill(0.0);
        } else {
            let scale = 1.0 - threshold / norm;
            out.row_mut(i).mapv_inplace(|x| x * scale);
        }
    }
    Ok(out)
}

/// Hard threshold on columns for the weighted ℓ2,0 count: column j survives
/// iff ‖A_·j‖₂ > √(2τβ̄_j); ties zero out.
pub fn prox_group_l0_columns(
    a: ArrayView2<f64>,
    col_weights: &[f64],
    tau: f64,
) -> Result<Array2<f64>, PenaltyError> {
    check_tau(tau)?;
    check_weights(col_weights, a.ncols())?;
    let mut out = a.to_owned();
    if tau == 0.0 {
        return Ok(out);
    }
    for (j, &w) in col_weights.iter().enumerate() {
        let threshold = (2.0 * tau * w).sqrt();
        if col_norm(&a, j) <= threshold {
            out.column_mut(j).fill(0.0);
        }
    }
    Ok(out)
}

/// Hard threshold on entries for the ℓ0 count: entry survives iff |A_ij| > √(2τ);
/// ties zero out.
pub fn prox_l0_elements(a: ArrayView2<f64>, tau: f64) -> Result<Array2<f64>, PenaltyError> {
    check_tau(tau)?;
    let mut out = a.to_owned();
    if tau == 0.0 {
        return Ok(out);
    }
    let threshold = (2.0 * tau).sqrt();
    out.mapv_inplace(|x| if x.abs() > threshold { x } else { 0.0 });
    Ok(out)
}

/// Group soft-threshold on columns for the weighted group lasso:
/// column j scales by (1 − τβ̄_j/max(‖A_·j‖₂, τβ̄_j)).
pub fn prox_group_lasso_columns(
    a: ArrayView2<f64>,
    col_weights: &[f64],
    tau: f64,
) -> Result<Array2<f64>, PenaltyError> {
    check_tau(tau)?;
    check_weights(col_weights, a.ncols())?;
    let mut out = a.to_owned();
    if tau == 0.0 {
        return Ok(out);
    }
    for (j, &w) in col_weights.iter().enumerate() {
        let threshold = tau * w;
        let norm = col_norm(&a, j);
        if norm <= threshold {
            out.column_mut(j).fill(0.0);
        } else {
            let scale = 1.0 - threshold / norm;
            out.column_mut(j).mapv_inplace(|x| x * scale);
        }
    }
    Ok(out)
}

/// Entrywise soft threshold at τ: the ℓ1 prox.
pub fn prox_l1_elements(a: ArrayView2<f64>, tau: f64) -> Result<Array2<f64>, PenaltyError> {
    check_tau(tau)?;
    let mut out = a.to_owned();
    if tau == 0.0 {
        return Ok(out);
    }
    out.mapv_inplace(|x| soft_threshold(x, tau));
    Ok(out)
}

/// Value of the fusion penalty Σ_ι ω_ι‖A_ι·‖₂ (without the η factor).
pub fn fusion_penalty_value(rows: ArrayView2<f64>, omega: &[f64]) -> f64 {
    omega
        .iter()
        .enumerate()
        .map(|(i, &w)| w * row_norm(&rows, i))
        .sum()
}

/// Value of the inter-group term on a centered view block (without the
/// β(1−θ) factor). Counting terms treat magnitudes above `tol` as nonzero,
/// matching the feature-extraction rule.
pub fn inter_penalty_value(
    kind: InterPenalty,
    centered: ArrayView2<f64>,
    col_weights: &[f64],
    tol: f64,
) -> f64 {
    match kind {
        InterPenalty::GroupL0 => col_weights
            .iter()
            .enumerate()
            .map(|(j, &w)| if col_norm(&centered, j) > tol { w } else { 0.0 })
            .sum(),
        InterPenalty::GroupLasso => col_weights
            .iter()
            .enumerate()
            .map(|(j, &w)| w * col_norm(&centered, j))
            .sum(),
        InterPenalty::None => 0.0,
    }
}

/// Value of the intra-group term on a centered view block (without the βθ
/// factor). The ℓ0 count treats magnitudes above `tol` as nonzero.
pub fn intra_penalty_value(kind: IntraPenalty, centered: ArrayView2<f64>, tol: f64) -> f64 {
    match kind {
        IntraPenalty::L0 => centered.iter().filter(|x| x.abs() > tol).count() as f64,
        IntraPenalty::L1 => centered.iter().map(|x| x.abs()).sum(),
        IntraPenalty::None => 0.0,
    }
}
