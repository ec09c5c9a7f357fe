//! The four external clustering metrics and their key properties: label
//! names never matter, and the adjusted Rand index is chance-corrected.
//!
//! ```text
//! cargo run --release --example evaluate_metrics
//! ```

use mvfuse::{accuracy, ari, fmi, nmi};

fn report(tag: &str, truth: &[usize], pred: &[usize]) -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{tag}: acc {:.4}  nmi {:.4}  ari {:+.4}  fmi {:.4}",
        accuracy(truth, pred)?,
        nmi(truth, pred)?,
        ari(truth, pred)?,
        fmi(truth, pred)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = vec![1, 1, 1, 2, 2, 2, 3, 3, 3];

    // Identical partition under different label names: all metrics hit 1.
    let renamed = vec![7, 7, 7, 5, 5, 5, 9, 9, 9];
    report("renamed labels   ", &truth, &renamed)?;

    // One sample moved to the wrong cluster.
    let one_off = vec![1, 1, 1, 2, 2, 2, 3, 3, 2];
    report("one sample off   ", &truth, &one_off)?;

    // Everything merged into a single cluster: ARI is exactly 0 because a
    // constant prediction carries no information beyond chance — while the
    // unadjusted FMI stays misleadingly high.
    let merged = vec![1; 9];
    report("all merged       ", &truth, &merged)?;

    // A labeling that systematically splits every true cluster scores worse
    // than chance: ARI goes negative, which no unadjusted score can signal.
    let anti = vec![1, 2, 3, 1, 2, 3, 1, 2, 3];
    report("anti-correlated  ", &truth, &anti)?;

    Ok(())
}
