//! Timing the two cost centers separately: the one-time Cholesky
//! factorization (cubic in the sample count, shared across solves on the
//! same graph) and the per-iteration update cost (linear in the feature
//! count).
//!
//! ```text
//! cargo run --release --example scaling_bench
//! ```

use mvfuse::run_scaling;

fn main() {
    // (samples, features) pairs; each cell is the median of 3 repeats.
    let sizes = [(50, 20), (100, 20), (100, 80), (200, 80)];
    let table = run_scaling(&sizes, 3);
    print!("{}", table.to_csv());

    let factor_growth = table.row(200, 80).unwrap().t_factor / table.row(100, 80).unwrap().t_factor;
    let iter_growth = table.row(100, 80).unwrap().t_per_iter / table.row(100, 20).unwrap().t_per_iter;
    println!("\nfactorization time ×{factor_growth:.1} when samples double (cubic one-time cost)");
    println!("per-iteration time ×{iter_growth:.1} when features quadruple (linear recurring cost)");
}
