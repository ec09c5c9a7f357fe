//! Dataset and hyperparameter types: validation and assembly of multi-view data.
//!
//! A [`MultiViewDataset`] is an ordered list of views sharing the sample axis.
//! Each view carries its own loss, a view weight ζ_v (default 1/V), and
//! per-feature penalty weights β̄^v (default all 1). Assembly validates
//! everything up front so the solver can assume well-formed inputs.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::losses::{loss_center, LossCenter, LossKind};
use crate::penalties::PenaltyFamily;

/// Errors raised while validating views, datasets, or hyperparameters.
#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("dataset needs at least one view")]
    EmptyViewList,
    #[error("view {view} has {found} samples but view 0 has {expected}")]
    MismatchedSampleCount {
        view: usize,
        expected: usize,
        found: usize,
    },
    #[error("view {view} needs at least 2 samples, got {found}")]
    TooFewSamples { view: usize, found: usize },
    #[error("view {view} has no feature columns")]
    EmptyView { view: usize },
    #[error("view {view} has a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { view: usize, row: usize, col: usize },
    #[error("bernoulli view {view} has entry {value} outside [0, 1] at ({row}, {col})")]
    DomainViolation {
        view: usize,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error("view {view} has non-positive weight {value}")]
    BadViewWeight { view: usize, value: f64 },
    #[error("view {view} feature weight {index} is {value}, must be finite and positive")]
    BadFeatureWeight {
        view: usize,
        index: usize,
        value: f64,
    },
    #[error("view {view} has {found} feature weights for {expected} columns")]
    FeatureWeightLength {
        view: usize,
        expected: usize,
        found: usize,
    },
    #[error("hyperparameter {name} = {value} violates: {requirement}")]
    InvalidHyperParam {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
}

/// One feature block observed on the common samples, before assembly.
///
/// Weight fields left unset are resolved at assembly time: the view weight
/// defaults to 1/V and the feature weights default to all ones.
#[derive(Debug, Clone)]
pub struct View {
    matrix: Array2<f64>,
    loss: LossKind,
    weight: Option<f64>,
    feature_weights: Option<Vec<f64>>,
}

impl View {
    pub fn new(matrix: Array2<f64>, loss: LossKind) -> Self {
        View {
            matrix,
            loss,
            weight: None,
            feature_weights: None,
        }
    }

    /// Sets an explicit view weight ζ_v (must be positive).
    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = Some(weight);
        self
    }

    /// Sets explicit per-feature penalty weights β̄^v (must be positive).
    pub fn with_feature_weights(mut self, weights: Vec<f64>) -> Self {
        self.feature_weights = Some(weights);
        self
    }
}

/// A view after validation, with all weights resolved.
#[derive(Debug, Clone)]
pub struct ResolvedView {
    matrix: Array2<f64>,
    loss: LossKind,
    weight: f64,
    feature_weights: Vec<f64>,
}

impl ResolvedView {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }
    pub fn loss(&self) -> LossKind {
        self.loss
    }
    pub fn weight(&self) -> f64 {
        self.weight
    }
    pub fn feature_weights(&self) -> &[f64] {
        &self.feature_weights
    }
    pub fn n_features(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Validated multi-view dataset: ordered views on a common sample axis.
///
/// Immutable after assembly; safe to share read-only across concurrent
/// solver runs.
#[derive(Debug, Clone)]
pub struct MultiViewDataset {
    views: Vec<ResolvedView>,
    n: usize,
    p: usize,
    col_offsets: Vec<usize>,
}

/// Uniform default view weights ζ_v = 1/V.
pub fn default_view_weights(n_views: usize) -> Vec<f64> {
    assert!(n_views >= 1, "need at least one view");
    vec![1.0 / n_views as f64; n_views]
}

/// Validates and assembles views into a dataset.
///
/// Checks: consistent sample counts, n ≥ 2, p_v ≥ 1, finite entries,
/// bernoulli entries in [0, 1], positive weights. Unset view weights resolve
/// to 1/V; a warning is logged when the resolved weights do not sum to 1
/// (they are never renormalized).
pub fn assemble_dataset(views: Vec<View>) -> Result<MultiViewDataset, DataError> {
    if views.is_empty() {
        return Err(DataError::EmptyViewList);
    }
    let n = views[0].matrix.nrows();
    let default_weight = 1.0 / views.len() as f64;
    let mut resolved = Vec::with_capacity(views.len());
    for (v, view) in views.into_iter().enumerate() {
        let (rows, cols) = view.matrix.dim();
        if rows != n {
            return Err(DataError::MismatchedSampleCount {
                view: v,
                expected: n,
                found: rows,
            });
        }
        if rows < 2 {
            return Err(DataError::TooFewSamples { view: v, found: rows });
        }
        if cols == 0 {
            return Err(DataError::EmptyView { view: v });
        }
        for ((row, col), &value) in view.matrix.indexed_iter() {
            if !value.is_finite() {
                return Err(DataError::NonFiniteEntry { view: v, row, col });
            }
            if view.loss == LossKind::Bernoulli && !(0.0..=1.0).contains(&value) {
                return Err(DataError::DomainViolation {
                    view: v,
                    row,
                    col,
                    value,
                });
            }
        }
        let weight = view.weight.unwrap_or(default_weight);
        if weight <= 0.0 || !weight.is_finite() {
            return Err(DataError::BadViewWeight { view: v, value: weight });
        }
        let feature_weights = match view.feature_weights {
            Some(w) => {
                if w.len() != cols {
                    return Err(DataError::FeatureWeightLength {
                        view: v,
                        expected: cols,
                        found: w.len(),
                    });
                }
                for (index, &value) in w.iter().enumerate() {
                    if value <= 0.0 || !value.is_finite() {
                        return Err(DataError::BadFeatureWeight { view: v, index, value });
                    }
                }
                w
            }
            None => vec![1.0; cols],
        };
        resolved.push(ResolvedView {
            matrix: view.matrix,
            loss: view.loss,
            weight,
            feature_weights,
        });
    }
    let weight_sum: f64 = resolved.iter().map(|v| v.weight).sum();
    if (weight_sum - 1.0).abs() > 1e-12 {
        log::warn!("view weights sum to {weight_sum}, not 1; using them as given");
    }
    let mut col_offsets = Vec::with_capacity(resolved.len() + 1);
    let mut p = 0;
    for view in &resolved {
        col_offsets.push(p);
        p += view.n_features();
    }
    col_offsets.push(p);
    Ok(MultiViewDataset {
        views: resolved,
        n,
        p,
        col_offsets,
    })
}

impl MultiViewDataset {
    pub fn n_samples(&self) -> usize {
        self.n
    }

    /// Total feature count Σ_v p_v.
    pub fn n_features(&self) -> usize {
        self.p
    }

    pub fn n_views(&self) -> usize {
        self.views.len()
    }

    pub fn views(&self) -> &[ResolvedView] {
        &self.views
    }

    pub fn view(&self, v: usize) -> &ResolvedView {
        &self.views[v]
    }

    /// Column range of view v inside the concatenated feature axis.
    pub fn col_range(&self, v: usize) -> std::ops::Range<usize> {
        self.col_offsets[v]..self.col_offsets[v + 1]
    }

    /// The concatenated data matrix X (n × p).
    pub fn concatenated(&self) -> Array2<f64> {
        let mut x = Array2::zeros((self.n, self.p));
        for (v, view) in self.views.iter().enumerate() {
            x.slice_mut(ndarray::s![.., self.col_range(v)])
                .assign(view.matrix());
        }
        x
    }

    /// Loss-specific centers x̄^v for every view.
    pub fn loss_centers(&self) -> Vec<LossCenter> {
        self.views
            .iter()
            .map(|view| loss_center(view.loss(), view.matrix().view()))
            .collect()
    }

    /// The concatenated center broadcast X̄ (n × p, each column constant).
    pub fn center_matrix(&self) -> Array2<f64> {
        let mut xbar = Array2::zeros((self.n, self.p));
        for (v, center) in self.loss_centers().iter().enumerate() {
            xbar.slice_mut(ndarray::s![.., self.col_range(v)])
                .assign(&center.broadcast(self.n));
        }
        xbar
    }

    /// Concatenated per-column center values (length p).
    pub fn center_values(&self) -> Array1<f64> {
        let mut out = Array1::zeros(self.p);
        for (v, center) in self.loss_centers().iter().enumerate() {
            out.slice_mut(ndarray::s![self.col_range(v)])
                .assign(center.values());
        }
        out
    }
}

/// Rule deciding when a fusion edge counts as merged during extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MergeMode {
    /// Edge fused iff its row of the fusion slack E is exactly zero
    /// (the group soft-threshold produces exact zeros). Default.
    #[serde(rename = "exact_zero_on_E")]
    ExactZeroOnE,
    /// Edge fused iff ‖(DU)_ι·‖₂ falls below a scaled tolerance; fallback for
    /// runs that exit at the iteration limit.
    #[serde(rename = "tolerance_on_DU")]
    ToleranceOnDu,
}

/// Solver and model hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HyperParams {
    /// Fusion strength η ≥ 0.
    pub eta: f64,
    /// Sparsity strength β ≥ 0.
    pub beta: f64,
    /// Inter/intra balance θ ∈ [0, 1]: θ=0 is all inter-group, θ=1 all intra-group.
    pub theta: f64,
    /// Fusion weight decay rate φ > 0 in ω = exp(−φ·gower).
    pub phi: f64,
    /// Neighborhood size for the fusion graph, 1 ≤ K ≤ n−1.
    pub k_neighbors: usize,
    /// ADMM penalty parameter σ > 0 (fixed per run).
    pub sigma: f64,
    /// Which inter/intra sparsity terms are active.
    pub penalty_family: PenaltyFamily,
    /// Absolute stopping tolerance.
    pub eps_abs: f64,
    /// Relative stopping tolerance.
    pub eps_rel: f64,
    /// Iteration cap; exceeding it flags the run as not converged.
    pub max_iter: usize,
    /// Edge-merge rule for partition extraction.
    pub merge_mode: MergeMode,
    /// Tolerance for the `tolerance_on_DU` merge rule.
    pub merge_tol: f64,
    /// Magnitude below which a centered centroid entry counts as zero.
    pub support_tol: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            eta: 1.0,
            beta: 0.0,
            theta: 0.5,
            phi: 1.0,
            k_neighbors: 5,
            sigma: 1.0,
            penalty_family: PenaltyFamily::GroupL0L0,
            eps_abs: 1e-5,
            eps_rel: 1e-4,
            max_iter: 2000,
            merge_mode: MergeMode::ExactZeroOnE,
            merge_tol: 1e-6,
            support_tol: 1e-8,
        }
    }
}

impl HyperParams {
    /// Validates every stated range; `n` is the dataset's sample count
    /// (bounds K).
    pub fn validate(&self, n: usize) -> Result<(), DataError> {
        fn check(
            ok: bool,
            name: &'static str,
            value: f64,
            requirement: &'static str,
        ) -> Result<(), DataError> {
            if ok {
                Ok(())
            } else {
                Err(DataError::InvalidHyperParam {
                    name,
                    value,
                    requirement,
                })
            }
        }
        check(self.eta >= 0.0 && self.eta.is_finite(), "eta", self.eta, "eta ≥ 0")?;
        check(self.beta >= 0.0 && self.beta.is_finite(), "beta", self.beta, "beta ≥ 0")?;
        check(
            (0.0..=1.0).contains(&self.theta),
            "theta",
            self.theta,
            "theta in [0, 1]",
        )?;
        check(self.phi > 0.0 && self.phi.is_finite(), "phi", self.phi, "phi > 0")?;
        check(
            self.k_neighbors >= 1,
            "k_neighbors",
            self.k_neighbors as f64,
            "k_neighbors ≥ 1",
        )?;
        check(
            self.k_neighbors <= n.saturating_sub(1),
            "k_neighbors",
            self.k_neighbors as f64,
            "k_neighbors ≤ n − 1",
        )?;
        check(
            self.sigma > 0.0 && self.sigma.is_finite(),
            "sigma",
            self.sigma,
            "sigma > 0",
        )?;
        // Zero tolerances are legal: they force a fixed-iteration run that
        // stops only at max_iter (used by reference solves and benchmarks).
        check(
            self.eps_abs >= 0.0 && self.eps_abs.is_finite(),
            "eps_abs",
            self.eps_abs,
            "eps_abs ≥ 0",
        )?;
        check(
            self.eps_rel >= 0.0 && self.eps_rel.is_finite(),
            "eps_rel",
            self.eps_rel,
            "eps_rel ≥ 0",
        )?;
        check(
            self.max_iter >= 1,
            "max_iter",
            self.max_iter as f64,
            "max_iter ≥ 1",
        )?;
        check(self.merge_tol >= 0.0, "merge_tol", self.merge_tol, "merge_tol ≥ 0")?;
        check(
            self.support_tol >= 0.0,
            "support_tol",
            self.support_tol,
            "support_tol ≥ 0",
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn gauss(matrix: Array2<f64>) -> View {
        View::new(matrix, LossKind::Gaussian)
    }

    #[test]
    fn assembles_two_views_and_counts_features() {
        let a = Array2::zeros((4, 2));
        let b = Array2::zeros((4, 3));
        let ds = assemble_dataset(vec![gauss(a), gauss(b)]).unwrap();
        assert_eq!(ds.n_samples(), 4);
        assert_eq!(ds.n_features(), 5);
        assert_eq!(ds.col_range(0), 0..2);
        assert_eq!(ds.col_range(1), 2..5);
        assert_eq!(ds.view(0).weight(), 0.5);
        assert_eq!(ds.view(1).feature_weights(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn rejects_mismatched_sample_counts() {
        let a = Array2::zeros((4, 2));
        let b = Array2::zeros((5, 3));
        assert_eq!(
            assemble_dataset(vec![gauss(a), gauss(b)]).unwrap_err(),
            DataError::MismatchedSampleCount {
                view: 1,
                expected: 4,
                found: 5
            }
        );
    }

    #[test]
    fn rejects_bernoulli_out_of_domain() {
        let m = array![[0.0, 0.5], [1.0, 1.5]];
        let err = assemble_dataset(vec![View::new(m, LossKind::Bernoulli)]).unwrap_err();
        assert_eq!(
            err,
            DataError::DomainViolation {
                view: 0,
                row: 1,
                col: 1,
                value: 1.5
            }
        );
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        let m = array![[0.0], [f64::NAN]];
        assert_eq!(
            assemble_dataset(vec![gauss(m)]).unwrap_err(),
            DataError::NonFiniteEntry {
                view: 0,
                row: 1,
                col: 0
            }
        );
        assert_eq!(assemble_dataset(vec![]).unwrap_err(), DataError::EmptyViewList);
        let single_row = Array2::zeros((1, 2));
        assert_eq!(
            assemble_dataset(vec![gauss(single_row)]).unwrap_err(),
            DataError::TooFewSamples { view: 0, found: 1 }
        );
    }

    #[test]
    fn rejects_bad_weights() {
        let m = Array2::zeros((3, 2));
        assert!(matches!(
            assemble_dataset(vec![gauss(m.clone()).with_weight(-1.0)]).unwrap_err(),
            DataError::BadViewWeight { view: 0, .. }
        ));
        assert!(matches!(
            assemble_dataset(vec![gauss(m.clone()).with_feature_weights(vec![1.0])]).unwrap_err(),
            DataError::FeatureWeightLength {
                view: 0,
                expected: 2,
                found: 1
            }
        ));
        assert!(matches!(
            assemble_dataset(vec![gauss(m).with_feature_weights(vec![1.0, 0.0])]).unwrap_err(),
            DataError::BadFeatureWeight { view: 0, index: 1, .. }
        ));
    }

    #[test]
    fn default_weights_are_uniform_and_sum_to_one() {
        assert_eq!(default_view_weights(1), vec![1.0]);
        assert_eq!(default_view_weights(4), vec![0.25; 4]);
        let w = default_view_weights(3);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assembly_preserves_view_order_and_content() {
        let a = array![[1.0, 2.0], [3.0, 4.0]];
        let b = array![[9.0], [8.0]];
        let ds = assemble_dataset(vec![
            gauss(a.clone()),
            View::new(b.clone(), LossKind::Manhattan),
        ])
        .unwrap();
        assert_eq!(ds.view(0).matrix(), &a);
        assert_eq!(ds.view(1).matrix(), &b);
        assert_eq!(ds.view(1).loss(), LossKind::Manhattan);
        // Re-assembling the assembled views is idempotent.
        let views: Vec<View> = ds
            .views()
            .iter()
            .map(|v| {
                View::new(v.matrix().clone(), v.loss())
                    .with_weight(v.weight())
                    .with_feature_weights(v.feature_weights().to_vec())
            })
            .collect();
        let ds2 = assemble_dataset(views).unwrap();
        assert_eq!(ds2.view(0).matrix(), ds.view(0).matrix());
        assert_eq!(ds2.n_features(), ds.n_features());
    }

    #[test]
    fn concatenation_and_centers_line_up() {
        let a = array![[1.0, 2.0], [3.0, 4.0]];
        let b = array![[10.0], [20.0]];
        let ds = assemble_dataset(vec![gauss(a), gauss(b)]).unwrap();
        let x = ds.concatenated();
        assert_eq!(x, array![[1.0, 2.0, 10.0], [3.0, 4.0, 20.0]]);
        let xbar = ds.center_matrix();
        assert_eq!(xbar, array![[2.0, 3.0, 15.0], [2.0, 3.0, 15.0]]);
        assert_eq!(ds.center_values(), ndarray::arr1(&[2.0, 3.0, 15.0]));
    }

    #[test]
    fn hyperparams_defaults_validate() {
        let hp = HyperParams::default();
        assert!(hp.validate(10).is_ok());
        assert!(matches!(
            hp.validate(4).unwrap_err(),
            DataError::InvalidHyperParam {
                name: "k_neighbors",
                ..
            }
        ));
    }

    #[test]
    fn hyperparams_ranges_are_enforced() {
        let hp = HyperParams {
            theta: 1.5,
            ..HyperParams::default()
        };
        assert!(matches!(
            hp.validate(10).unwrap_err(),
            DataError::InvalidHyperParam { name: "theta", .. }
        ));
        let hp = HyperParams {
            eta: -0.1,
            ..HyperParams::default()
        };
        assert!(hp.validate(10).is_err());
        let hp = HyperParams {
            sigma: 0.0,
            ..HyperParams::default()
        };
        assert!(hp.validate(10).is_err());
    }

    #[test]
    fn merge_mode_serde_names() {
        assert_eq!(
            serde_json::to_string(&MergeMode::ExactZeroOnE).unwrap(),
            "\"exact_zero_on_E\""
        );
        assert_eq!(
            serde_json::to_string(&MergeMode::ToleranceOnDu).unwrap(),
            "\"tolerance_on_DU\""
        );
        assert_eq!(
            serde_json::from_str::<MergeMode>("\"tolerance_on_DU\"").unwrap(),
            MergeMode::ToleranceOnDu
        );
    }
}
