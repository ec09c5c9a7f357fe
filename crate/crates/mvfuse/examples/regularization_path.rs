//! Tracing the fusion path: cluster counts along an automatically probed η
//! grid, plus grid search with a target cluster count.
//!
//! ```text
//! cargo run --release --example regularization_path
//! ```

use mvfuse::{
    build_graph, default_eta_grid, eta_path, grid_search, HyperParams, PathSpec, synthetic_blobs,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = synthetic_blobs(45, 6, 1);
    let params = HyperParams::default();
    let graph = build_graph(&dataset, params.k_neighbors, params.phi)?;

    // The default grid is probed from the data: it spans from "nothing
    // fuses" to "everything fuses" in log-spaced steps.
    let grid = default_eta_grid(&dataset, &graph, &params)?;
    println!(
        "probed η grid: {} points in [{:.4}, {:.4}]",
        grid.len(),
        grid.first().unwrap(),
        grid.last().unwrap()
    );

    // Solves are warm-started along the path, so the whole sweep costs far
    // less than independent solves would.
    let path = eta_path(&dataset, &graph, &params, &grid)?;
    println!("\n      η    clusters  iterations");
    for record in &path.records {
        let solved = record.solved().expect("every path point solves");
        println!(
            "{:9.4}  {:8}  {:10}",
            record.point.eta,
            solved.n_clusters,
            solved.diagnostics.iterations
        );
    }

    // Grid search with a target cluster count picks the smallest η whose
    // solution has exactly that many clusters.
    let mut spec = PathSpec::eta_only(&params, grid);
    spec.target_k = Some(3);
    let searched = grid_search(&dataset, &graph, &params, &spec, None)?;
    match searched.best_record() {
        Some(best) => {
            let solved = best.solved().expect("best record solved");
            println!(
                "\nsmallest η with 3 clusters: η = {:.4} ({} clusters)",
                best.point.eta, solved.n_clusters
            );
        }
        None => println!("\nno grid point produced exactly 3 clusters"),
    }
    Ok(())
}
