//! Clustering heterogeneous data: a continuous view, a count view, and a
//! binary view over the same samples, each with its own loss.
//!
//! ```text
//! cargo run --release --example mixed_views
//! ```

use mvfuse::{assemble_dataset, build_graph, solve, HyperParams, LossKind, View};
use ndarray::Array2;

/// 18 samples in two groups of 9. All three views are deterministic
/// patterns: group structure plus small sample-dependent wiggle.
fn build_views() -> Vec<View> {
    let n = 18;
    let group = |i: usize| (i >= 9) as usize;

    // Continuous view: 3 features, groups separated in the first two.
    let mut continuous = Array2::zeros((n, 3));
    for i in 0..n {
        let g = group(i) as f64;
        let wiggle = ((i * 7 % 5) as f64 - 2.0) * 0.1;
        continuous[[i, 0]] = 4.0 * g + wiggle;
        continuous[[i, 1]] = -3.0 * g + 0.5 * wiggle;
        continuous[[i, 2]] = wiggle; // uninformative
    }

    // Count view: 2 features, modeled with the absolute-deviation loss which
    // centers by medians and is robust to the spiky entries.
    let mut counts = Array2::zeros((n, 2));
    for i in 0..n {
        let g = group(i);
        counts[[i, 0]] = (2 + 10 * g + i % 3) as f64;
        counts[[i, 1]] = (4 + i % 4) as f64; // uninformative
    }

    // Binary view: 2 features, the first indicating the group with two
    // flipped samples, the second alternating (uninformative).
    let mut binary = Array2::zeros((n, 2));
    for i in 0..n {
        let mut bit = group(i);
        if i == 4 || i == 13 {
            bit = 1 - bit; // noise flips
        }
        binary[[i, 0]] = bit as f64;
        binary[[i, 1]] = (i % 2) as f64;
    }

    vec![
        View::new(continuous, LossKind::Gaussian),
        View::new(counts, LossKind::Manhattan),
        View::new(binary, LossKind::Bernoulli),
    ]
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = assemble_dataset(build_views())?;
    let truth: Vec<usize> = (0..18).map(|i| if i >= 9 { 2 } else { 1 }).collect();

    let params = HyperParams {
        eta: 3.0,
        k_neighbors: 4,
        ..HyperParams::default()
    };
    let graph = build_graph(&dataset, params.k_neighbors, params.phi)?;
    let (_, result) = solve(&dataset, &graph, &params, None)?;

    println!(
        "{} views over {} samples, {} clusters found (converged: {})",
        dataset.n_views(),
        dataset.n_samples(),
        result.n_clusters,
        result.diagnostics.converged
    );
    println!("labels: {:?}", result.labels);
    println!(
        "accuracy vs the generating groups: {:.4}",
        mvfuse::accuracy(&truth, &result.labels)?
    );
    Ok(())
}
