//! Minimal end-to-end run: build a dataset, build the fusion graph, solve,
//! and read the labels.
//!
//! ```text
//! cargo run --release --example basic_clustering
//! ```

use mvfuse::{build_graph, solve, synthetic_blobs, HyperParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 45 samples in 3 gaussian blobs (round-robin assignment), 6 features of
    // which the first 4 carry the cluster structure.
    let dataset = synthetic_blobs(45, 6, 1);
    let truth: Vec<usize> = (0..45).map(|i| i % 3 + 1).collect();

    // η controls how strongly neighboring samples are fused: larger η, fewer
    // clusters. All other parameters stay at their defaults.
    let params = HyperParams {
        eta: 2.0,
        ..HyperParams::default()
    };

    // The k-nearest-neighbor fusion graph is built once and can be reused
    // across solves with different hyperparameters.
    let graph = build_graph(&dataset, params.k_neighbors, params.phi)?;
    let (_, result) = solve(&dataset, &graph, &params, None)?;

    println!(
        "converged: {} after {} iterations",
        result.diagnostics.converged, result.diagnostics.iterations
    );
    println!("clusters found: {}", result.n_clusters);
    println!("labels (1-based): {:?}", result.labels);

    let ari = mvfuse::ari(&truth, &result.labels)?;
    println!("adjusted Rand index vs the generating assignment: {ari:.4}");
    Ok(())
}
