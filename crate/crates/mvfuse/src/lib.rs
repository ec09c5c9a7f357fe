//! # mvfuse
//!
//! Fusion-regularized clustering for multi-view data with mixed column
//! types. Each view brings its own loss (gaussian, manhattan, or bernoulli)
//! and the views share one centroid matrix `U`; a weighted sum-of-norms
//! fusion penalty over a k-nearest-neighbor sample graph merges centroid
//! rows into clusters, while non-convex group sparsity on the centered
//! centroids selects informative features per view. Everything is solved by
//! a two-block alternating-direction method whose subproblems are all
//! closed-form or one-dimensional.
//!
//! The number of clusters is not an input: it emerges from the fusion
//! strength η, and the regularization-path tools sweep η (and the sparsity
//! knobs β, θ and the step σ) to expose the whole clusterpath.
//!
//! ## Quick start
//!
//! ```
//! use mvfuse::{assemble_dataset, build_graph, solve, HyperParams, LossKind, View};
//! use ndarray::array;
//!
//! // Three 2-sample blobs in one gaussian view.
//! let matrix = array![
//!     [0.0, 0.1], [0.2, 0.0],
//!     [5.0, 5.1], [5.2, 4.9],
//!     [9.9, 10.0], [10.1, 9.8],
//! ];
//! let dataset = assemble_dataset(vec![View::new(matrix, LossKind::Gaussian)])?;
//! let graph = build_graph(&dataset, 2, 1.0)?;
//! let params = HyperParams { eta: 2.0, k_neighbors: 2, ..HyperParams::default() };
//! let (_state, result) = solve(&dataset, &graph, &params, None)?;
//! assert_eq!(result.n_clusters, 3);
//! assert_eq!(result.labels, vec![1, 1, 2, 2, 3, 3]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! ## Module map
//!
//! - [`data`]: views, dataset assembly, hyperparameters.
//! - [`losses`]: per-view loss values, centers, and proximal maps.
//! - [`penalties`]: fusion and sparsity proximal operators and penalty values.
//! - [`graph`]: Gower distances, k-NN fusion graph, difference operator D.
//! - [`solver`]: the ADMM loop, cached factorization, diagnostics.
//! - [`extract`]: partition and feature-support extraction.
//! - [`metrics`]: ACC / NMI / ARI / FMI against ground truth.
//! - [`path`]: η paths, grid search, default grids.
//! - [`io`]: CSV/JSON ingestion and result documents.
//! - [`cli`]: the `mvfuse` command-line entry point.
//! - [`bench`]: deterministic scaling harness.

pub mod bench;
pub mod cli;
pub mod data;
pub mod extract;
pub mod graph;
pub mod io;
pub mod losses;
pub mod metrics;
pub mod path;
pub mod penalties;
pub mod solver;

pub use bench::{default_scaling_sizes, run_scaling, synthetic_blobs, ScalingRow, ScalingTable};
pub use cli::cli_main;
pub use data::{
    assemble_dataset, default_view_weights, DataError, HyperParams, MergeMode, MultiViewDataset,
    View,
};
pub use extract::{extract_feature_support, extract_partition, extract_result};
pub use graph::{aggregate_gower, build_graph, gower_feature_distance, FusionGraph, GraphError};
pub use io::{
    load_labels_csv, load_run_config, load_view_csv, load_views, write_path_result, write_result,
    IoError, PathSpecConfig, ResultDocument, RunConfig, ViewConfig,
};
pub use losses::{loss_center, loss_prox, loss_value, LossCenter, LossError, LossKind};
pub use metrics::{accuracy, ari, fmi, nmi, ContingencyTable, MetricsError};
pub use path::{
    default_beta_grid, default_eta_grid, default_sigma_grid, default_theta_grid, eta_path,
    grid_search, log_space, GridPoint, MetricSet, PathError, PathRecord, PathResult, PathSpec,
    RecordOutcome, SolvedRecord,
};
pub use penalties::{
    prox_fusion_rows, prox_group_l0_columns, prox_group_lasso_columns, prox_l0_elements,
    prox_l1_elements, InterPenalty, IntraPenalty, PenaltyError, PenaltyFamily,
};
pub use solver::{
    factorization_count, objective_value, solve, CachedFactorization, ClusteringResult,
    Diagnostics, SolverContext, SolverError, SolverState, TraceRecord, STABILITY_REL_TOL,
    STABILITY_WINDOW,
};
