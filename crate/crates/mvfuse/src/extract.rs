//! Partition and feature-support extraction from a finished solver state.
//!
//! Two samples share a cluster when their fusion edge has been driven to
//! zero; connected components of fused edges (union-find) define the
//! partition. Feature selection reads exact zeros from the hard-threshold
//! slack blocks when the penalty family provides them, and falls back to a
//! tolerance test on the centered centroids otherwise.

use ndarray::{s, Array2};

use crate::data::{HyperParams, MergeMode, MultiViewDataset};
use crate::graph::FusionGraph;
use crate::penalties::{InterPenalty, IntraPenalty};
use crate::solver::{ClusteringResult, SolverState};

/// Union-find over sample indices with path compression.
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            // Attach the larger root under the smaller so the component
            // representative is always its smallest member.
            let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
            self.parent[hi] = lo;
        }
    }

    /// 1-based component labels numbered by smallest member index, plus the
    /// component count. Independent of the order unions were applied in.
    pub(crate) fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label_of_root = vec![0usize; n];
        let mut next = 0usize;
        let mut labels = Vec::with_capacity(n);
        for i in 0..n {
            let root = self.find(i);
            if label_of_root[root] == 0 {
                next += 1;
                label_of_root[root] = next;
            }
            labels.push(label_of_root[root]);
        }
        (labels, next)
    }
}

/// Derives the sample partition from the fused edges of a finished state.
///
/// With [`MergeMode::ExactZeroOnE`] an edge is fused iff its row of the
/// fusion slack E is exactly zero (the group soft-threshold produces exact
/// zeros). With [`MergeMode::ToleranceOnDu`] an edge is fused iff
/// ‖(DU)_ι·‖₂ ≤ merge_tol·(1 + ‖U‖_F/√(n·p)) — the fallback when a run ended
/// at the iteration cap. Labels are 1-based and numbered by each component's
/// smallest member.
pub fn extract_partition(
    state: &SolverState,
    graph: &FusionGraph,
    params: &HyperParams,
) -> (Vec<usize>, usize) {
    let n = graph.n_samples();
    let mut components = DisjointSet::new(n);
    match params.merge_mode {
        MergeMode::ExactZeroOnE => {
            for (idx, &(i, j)) in graph.edges().iter().enumerate() {
                if state.e().row(idx).iter().all(|&x| x == 0.0) {
                    components.union(i, j);
                }
            }
        }
        MergeMode::ToleranceOnDu => {
            let u = state.u();
            let np = (u.nrows() * u.ncols()) as f64;
            let u_norm = u.iter().map(|&x| x * x).sum::<f64>().sqrt();
            let threshold = params.merge_tol * (1.0 + u_norm / np.sqrt());
            let du = &state.du;
            for (idx, &(i, j)) in graph.edges().iter().enumerate() {
                let row_norm = du.row(idx).iter().map(|&x| x * x).sum::<f64>().sqrt();
                if row_norm <= threshold {
                    components.union(i, j);
                }
            }
        }
    }
    components.labels()
}

/// Derives per-view selected features (1-based column indices) and the
/// entrywise support mask of the centered centroids.
///
/// Feature j is selected iff its centered column norm exceeds `support_tol`;
/// a mask entry is true iff its centered value exceeds `support_tol` in
/// magnitude. When the penalty family carries the matching hard-threshold
/// term, the test reads the corresponding slack block (F for column groups,
/// F̄ for single entries), whose zeros are exact.
pub fn extract_feature_support(
    state: &SolverState,
    dataset: &MultiViewDataset,
    params: &HyperParams,
) -> (Vec<Vec<usize>>, Vec<Array2<bool>>) {
    let tol = params.support_tol;
    let inter = params.penalty_family.inter();
    let intra = params.penalty_family.intra();
    let centered = state.u() - &dataset.center_matrix();
    let mut selected = Vec::with_capacity(dataset.n_views());
    let mut masks = Vec::with_capacity(dataset.n_views());
    for v in 0..dataset.n_views() {
        let cols = dataset.col_range(v);
        let column_source = if inter == InterPenalty::GroupL0 {
            state.f().slice(s![.., cols.clone()])
        } else {
            centered.slice(s![.., cols.clone()])
        };
        let entry_source = if intra == IntraPenalty::L0 {
            state.f_bar().slice(s![.., cols.clone()])
        } else if inter == InterPenalty::GroupL0 {
            state.f().slice(s![.., cols.clone()])
        } else {
            centered.slice(s![.., cols.clone()])
        };
        let picks: Vec<usize> = column_source
            .axis_iter(ndarray::Axis(1))
            .enumerate()
            .filter(|(_, col)| col.iter().map(|&x| x * x).sum::<f64>().sqrt() > tol)
            .map(|(j, _)| j + 1)
            .collect();
        selected.push(picks);
        masks.push(entry_source.mapv(|x| x.abs() > tol));
    }
    (selected, masks)
}

/// Assembles the full clustering result (partition, feature support,
/// centroids, diagnostics) from a finished state. Re-running this with
/// different `merge_mode`/tolerances does not require a new solve.
pub fn extract_result(
    state: &SolverState,
    dataset: &MultiViewDataset,
    graph: &FusionGraph,
    params: &HyperParams,
) -> ClusteringResult {
    let (labels, n_clusters) = extract_partition(state, graph, params);
    let (selected_features, support_mask) = extract_feature_support(state, dataset, params);
    ClusteringResult {
        labels,
        n_clusters,
        selected_features,
        support_mask,
        centroids: state.u().clone(),
        diagnostics: state.diagnostics(),
    }
}
