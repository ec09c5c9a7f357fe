//! Fusion graph construction: Gower distances, k-NN union edges, per-edge
//! weights, and the signed difference operator D.
//!
//! The fusion penalty only couples sample pairs that are neighbors under the
//! aggregate Gower distance — a range-normalized per-feature dissimilarity
//! that puts heterogeneous views on a common [0, 1] scale. Each retained edge
//! ι = (i, i′) carries a weight ω_ι = exp(−φ·gower(i, i′)), and the operator
//! D maps centroids to per-edge row differences (DU)_ι· = U_i· − U_i′·.

use std::sync::OnceLock;

use ndarray::{Array2, ArrayView2};
use thiserror::Error;

use crate::data::MultiViewDataset;
use crate::solver::CachedFactorization;

/// Errors from graph construction and operator application.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("k_neighbors = {k} out of range for n = {n} samples (need 1 ≤ k ≤ n−1)")]
    BadNeighborCount { k: usize, n: usize },
    #[error("phi must be strictly positive, got {0}")]
    BadPhi(f64),
    #[error("operator expects {expected} rows, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// k-NN fusion graph: ordered edge list, per-edge weights, and the cached
/// Gram matrix DᵀD. Immutable after construction; safe to share across
/// concurrent solver runs.
#[derive(Debug)]
pub struct FusionGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    laplacian: Array2<f64>,
    pub(crate) factorization: OnceLock<CachedFactorization>,
}

/// Per-column ranges (max − min) for every view, used to normalize Gower
/// distances. Zero-range (constant) columns contribute no dissimilarity.
fn column_ranges(dataset: &MultiViewDataset) -> Vec<Vec<f64>> {
    dataset
        .views()
        .iter()
        .map(|view| {
            view.matrix()
                .columns()
                .into_iter()
                .map(|col| {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for &x in col {
                        lo = lo.min(x);
                        hi = hi.max(x);
                    }
                    hi - lo
                })
                .collect()
        })
        .collect()
}

/// Range-normalized distance between samples i and i′ on feature j of view v:
/// |x_ij − x_i′j| / range_j, or 0 when the column is constant.
pub fn gower_feature_distance(
    dataset: &MultiViewDataset,
    i: usize,
    i_prime: usize,
    v: usize,
    j: usize,
) -> f64 {
    let matrix = dataset.view(v).matrix();
    let col = matrix.column(j);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in col {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let range = hi - lo;
    if range == 0.0 {
        return 0.0;
    }
    (matrix[[i, j]] - matrix[[i_prime, j]]).abs() / range
}

/// Aggregate Gower distance: the mean of per-feature distances over every
/// feature of every view, a value in [0, 1].
pub fn aggregate_gower(dataset: &MultiViewDataset, i: usize, i_prime: usize) -> f64 {
    let ranges = column_ranges(dataset);
    aggregate_with_ranges(dataset, &ranges, i, i_prime)
}

fn aggregate_with_ranges(
    dataset: &MultiViewDataset,
    ranges: &[Vec<f64>],
    i: usize,
    i_prime: usize,
) -> f64 {
    let mut total = 0.0;
    for (view, view_ranges) in dataset.views().iter().zip(ranges) {
        let matrix = view.matrix();
        for (j, &range) in view_ranges.iter().enumerate() {
            if range > 0.0 {
                total += (matrix[[i, j]] - matrix[[i_prime, j]]).abs() / range;
            }
        }
    }
    total / dataset.n_features() as f64
}

/// Builds the k-NN union fusion graph under the aggregate Gower distance.
///
/// The edge set is ε = {(i, i′), i < i′ : i′ among the K nearest of i, OR i
/// among the K nearest of i′}, with neighbor ties broken by smaller sample
/// index. Edges are ordered lexicographically; weights are exp(−φ·gower).
/// A dataset whose rows are all identical gets a warning (ranking falls back
/// to index order), not an error.
pub fn build_graph(
    dataset: &MultiViewDataset,
    k_neighbors: usize,
    phi: f64,
) -> Result<FusionGraph, GraphError> {
    let n = dataset.n_samples();
    if k_neighbors < 1 || k_neighbors > n - 1 {
        return Err(GraphError::BadNeighborCount { k: k_neighbors, n });
    }
    if phi <= 0.0 || !phi.is_finite() {
        return Err(GraphError::BadPhi(phi));
    }
    let ranges = column_ranges(dataset);
    // Dense pairwise distances; exact search is fine at desk scale.
    let mut dist = Array2::zeros((n, n));
    let mut max_dist = 0.0f64;
    for i in 0..n {
        for i_prime in (i + 1)..n {
            let d = aggregate_with_ranges(dataset, &ranges, i, i_prime);
            dist[[i, i_prime]] = d;
            dist[[i_prime, i]] = d;
            max_dist = max_dist.max(d);
        }
    }
    if max_dist == 0.0 {
        log::warn!("all samples identical under the Gower distance; neighbor ranking falls back to index order");
    }
    let mut edge_set = std::collections::BTreeSet::new();
    let mut order: Vec<usize> = Vec::with_capacity(n - 1);
    for i in 0..n {
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        // Ties broken by smaller index: the index is the sort key's second field.
        order.sort_by(|&a, &b| {
            dist[[i, a]]
                .partial_cmp(&dist[[i, b]])
                .expect("distances are finite")
                .then(a.cmp(&b))
        });
        for &j in order.iter().take(k_neighbors) {
            edge_set.insert((i.min(j), i.max(j)));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    let weights: Vec<f64> = edges
        .iter()
        .map(|&(i, j)| (-phi * dist[[i, j]]).exp())
        .collect();
    let mut laplacian = Array2::zeros((n, n));
    for &(i, j) in &edges {
        laplacian[[i, i]] += 1.0;
        laplacian[[j, j]] += 1.0;
        laplacian[[i, j]] -= 1.0;
        laplacian[[j, i]] -= 1.0;
    }
    Ok(FusionGraph {
        n,
        edges,
        weights,
        laplacian,
        factorization: OnceLock::new(),
    })
}

impl FusionGraph {
    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges (i, i′) with i < i′, 0-based, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Per-edge fusion weights ω_ι, aligned with `edges()`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The cached Gram matrix DᵀD (the graph Laplacian).
    pub fn laplacian(&self) -> &Array2<f64> {
        &self.laplacian
    }

    /// Applies D: row ι of the output is U_i· − U_i′·.
    pub fn apply_d(&self, u: ArrayView2<f64>) -> Result<Array2<f64>, GraphError> {
        if u.nrows() != self.n {
            return Err(GraphError::DimensionMismatch {
                expected: self.n,
                found: u.nrows(),
            });
        }
        let p = u.ncols();
        let mut out = Array2::zeros((self.edges.len(), p));
        for (row, &(i, j)) in self.edges.iter().enumerate() {
            let ri = u.row(i);
            let rj = u.row(j);
            let mut dst = out.row_mut(row);
            for c in 0..p {
                dst[c] = ri[c] - rj[c];
            }
        }
        Ok(out)
    }

    /// Applies Dᵀ: scatters each edge row +into sample i and −into sample i′.
    pub fn apply_d_transpose(&self, y: ArrayView2<f64>) -> Result<Array2<f64>, GraphError> {
        if y.nrows() != self.edges.len() {
            return Err(GraphError::DimensionMismatch {
                expected: self.edges.len(),
                found: y.nrows(),
            });
        }
        let p = y.ncols();
        let mut out = Array2::zeros((self.n, p));
        for (row, &(i, j)) in self.edges.iter().enumerate() {
            let src = y.row(row);
            for c in 0..p {
                out[[i, c]] += src[c];
                out[[j, c]] -= src[c];
            }
        }
        Ok(out)
    }
}
