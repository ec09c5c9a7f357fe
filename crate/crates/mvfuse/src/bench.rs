//! Scaling harness: times the one-time Cholesky factorization and the
//! per-iteration solver cost separately across instance sizes, since the
//! solver's complexity mixes one-time O(n³) work with per-iteration
//! O(|ε|p + n²p) work.
//!
//! Runs single-threaded for stable numbers and emits a CSV table
//! `n,p,edges,t_factor,t_per_iter` (seconds, median of repeats).

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use ndarray::Array2;

use crate::data::{assemble_dataset, HyperParams, MultiViewDataset, View};
use crate::graph::build_graph;
use crate::losses::LossKind;
use crate::solver::{solve, CachedFactorization};

/// Deterministic 64-bit generator (SplitMix64) for benchmark data; the
/// primary pipeline itself has no randomness anywhere.
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box–Muller.
    fn next_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Synthetic gaussian-blob dataset: 3 clusters assigned round-robin, the
/// first min(4, p) columns informative with cluster-mean separation 3.0,
/// the rest pure noise. Deterministic in `seed`.
pub fn synthetic_blobs(n: usize, p: usize, seed: u64) -> MultiViewDataset {
    let mut rng = SplitMix64::new(seed);
    let informative = p.min(4);
    let mut matrix = Array2::<f64>::zeros((n, p));
    for i in 0..n {
        let cluster = (i % 3) as f64;
        for j in 0..p {
            let mean = if j < informative { 3.0 * cluster } else { 0.0 };
            matrix[[i, j]] = mean + rng.next_normal();
        }
    }
    assemble_dataset(vec![View::new(matrix, LossKind::Gaussian)])
        .expect("generator output is always valid")
}

/// One timing row of the scaling table (times in seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub p: usize,
    pub edges: usize,
    pub t_factor: f64,
    pub t_per_iter: f64,
}

/// The full scaling table in the size order given to [`run_scaling`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
}

impl ScalingTable {
    /// CSV rendering with the fixed header `n,p,edges,t_factor,t_per_iter`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p,edges,t_factor,t_per_iter\n");
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.6e},{:.6e}",
                row.n, row.p, row.edges, row.t_factor, row.t_per_iter
            )
            .expect("string write cannot fail");
        }
        out
    }

    pub fn row(&self, n: usize, p: usize) -> Option<&ScalingRow> {
        self.rows.iter().find(|r| r.n == n && r.p == p)
    }
}

/// The default size sweep: n ∈ {50, 100, 200} × p ∈ {20, 80, 320}.
pub fn default_scaling_sizes() -> Vec<(usize, usize)> {
    let mut sizes = Vec::new();
    for &n in &[50usize, 100, 200] {
        for &p in &[20usize, 80, 320] {
            sizes.push((n, p));
        }
    }
    sizes
}

/// Times one operation: repeats it until at least 5 ms of wall clock is
/// accumulated and returns seconds per call.
fn time_op<F: FnMut()>(mut op: F) -> f64 {
    let mut reps = 1usize;
    loop {
        let start = Instant::now();
        for _ in 0..reps {
            op();
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_millis(5) {
            return elapsed.as_secs_f64() / reps as f64;
        }
        reps = reps.saturating_mul(2);
    }
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

const BENCH_NEIGHBORS: usize = 5;
const BENCH_ITERS: usize = 25;

/// Measures factorization time and per-iteration solve time (median over
/// `repeats`) for each (n, p) size on deterministic blob data with K = 5
/// neighbors. The per-iteration number comes from a fixed-length run
/// (tolerances zero, `BENCH_ITERS` iterations) divided by its iteration
/// count; the factorization is timed fresh, outside the per-graph cache.
pub fn run_scaling(sizes: &[(usize, usize)], repeats: usize) -> ScalingTable {
    let repeats = repeats.max(1);
    let mut rows = Vec::with_capacity(sizes.len());
    for &(n, p) in sizes {
        let dataset = synthetic_blobs(n, p, 0x5CA1_AB1E ^ (n as u64) << 16 ^ p as u64);
        let graph = build_graph(&dataset, BENCH_NEIGHBORS, 1.0).expect("valid bench sizes");
        let params = HyperParams {
            eta: 0.5,
            beta: 0.0,
            k_neighbors: BENCH_NEIGHBORS,
            eps_abs: 0.0,
            eps_rel: 0.0,
            max_iter: BENCH_ITERS,
            ..HyperParams::default()
        };
        // Prime the per-graph cache so the solve timings exclude it.
        let (warm, _) = solve(&dataset, &graph, &params, None).expect("bench solve");

        let mut shifted = graph.laplacian().clone();
        for i in 0..shifted.nrows() {
            shifted[[i, i]] += 3.0;
        }
        let factor_samples: Vec<f64> = (0..repeats)
            .map(|_| {
                time_op(|| {
                    let fac =
                        CachedFactorization::new(black_box(&shifted)).expect("SPD by construction");
                    black_box(&fac);
                })
            })
            .collect();
        let iter_samples: Vec<f64> = (0..repeats)
            .map(|_| {
                time_op(|| {
                    let (state, _) = solve(
                        black_box(&dataset),
                        black_box(&graph),
                        &params,
                        Some(&warm),
                    )
                    .expect("bench solve");
                    black_box(state.iterations());
                }) / BENCH_ITERS as f64
            })
            .collect();
        rows.push(ScalingRow {
            n,
            p,
            edges: graph.n_edges(),
            t_factor: median(factor_samples),
            t_per_iter: median(iter_samples),
        });
    }
    ScalingTable { rows }
}
