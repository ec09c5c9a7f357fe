//! Deterministic planted two-view instances used by integration tests: a
//! gaussian view with four informative columns and a count view with three
//! informative columns, both over sixty samples in three balanced clusters.
//!
//! Samplers are written directly on the ChaCha8 stream (one normal per pair
//! of uniforms, no caching) so that regenerating with the same seed is
//! bit-identical across platforms and versions.

use mvfuse::{assemble_dataset, LossKind, MultiViewDataset, View};
use ndarray::Array2;

use crate::rng::{poisson, standard_normal, ChaCha8Rng, SeedableRng};

/// A generated dataset together with its ground truth.
pub struct PlantedInstance {
    pub dataset: MultiViewDataset,
    /// 1-based cluster labels, one per sample.
    pub truth: Vec<usize>,
    /// 1-based informative-column indices, one list per view.
    pub informative: Vec<Vec<usize>>,
    pub seed: u64,
}

const N_PER_CLUSTER: usize = 20;
const N_SAMPLES: usize = 3 * N_PER_CLUSTER;
const GAUSSIAN_COLS: usize = 10;
const GAUSSIAN_INFORMATIVE: usize = 4;
const COUNT_COLS: usize = 8;
const COUNT_INFORMATIVE_RATES: [f64; 3] = [2.0, 8.0, 16.0];
const COUNT_NOISE_RATE: f64 = 4.0;

fn truth_labels() -> Vec<usize> {
    let mut labels = Vec::with_capacity(N_SAMPLES);
    for cluster in 1..=3 {
        labels.extend(std::iter::repeat_n(cluster, N_PER_CLUSTER));
    }
    labels
}

/// Gaussian view: columns 1–4 have cluster means 0, 3, 6 (3·(k−1)) with unit
/// noise; remaining columns are pure noise. Filled column by column so that
/// appending extra columns cannot disturb earlier draws.
fn gaussian_view(rng: &mut ChaCha8Rng, labels: &[usize]) -> Array2<f64> {
    let mut view = Array2::zeros((N_SAMPLES, GAUSSIAN_COLS));
    for j in 0..GAUSSIAN_COLS {
        for i in 0..N_SAMPLES {
            let mean = if j < GAUSSIAN_INFORMATIVE {
                3.0 * (labels[i] - 1) as f64
            } else {
                0.0
            };
            view[[i, j]] = mean + standard_normal(rng);
        }
    }
    view
}

/// Count view: columns 1–3 are Poisson with cluster-specific rates 2, 8, 16;
/// the remaining five columns are Poisson(4) noise.
fn count_view(rng: &mut ChaCha8Rng, labels: &[usize]) -> Array2<f64> {
    let mut view = Array2::zeros((N_SAMPLES, COUNT_COLS));
    for j in 0..COUNT_COLS {
        for i in 0..N_SAMPLES {
            let rate = if j < COUNT_INFORMATIVE_RATES.len() {
                COUNT_INFORMATIVE_RATES[labels[i] - 1]
            } else {
                COUNT_NOISE_RATE
            };
            view[[i, j]] = poisson(rng, rate);
        }
    }
    view
}

fn assemble(
    gaussian: Array2<f64>,
    counts: Array2<f64>,
    seed: u64,
) -> PlantedInstance {
    let truth = truth_labels();
    let informative = vec![
        (1..=GAUSSIAN_INFORMATIVE).collect(),
        (1..=COUNT_INFORMATIVE_RATES.len()).collect(),
    ];
    let dataset = assemble_dataset(vec![
        View::new(gaussian, LossKind::Gaussian),
        View::new(counts, LossKind::Manhattan),
    ])
    .expect("planted views are well-formed by construction");
    PlantedInstance {
        dataset,
        truth,
        informative,
        seed,
    }
}

/// The standard planted instance: 60 samples in three balanced clusters,
/// a 60×10 gaussian view and a 60×8 count view.
pub fn make_planted(seed: u64) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = truth_labels();
    let gaussian = gaussian_view(&mut rng, &labels);
    let counts = count_view(&mut rng, &labels);
    assemble(gaussian, counts, seed)
}

/// The planted instance with `extra` pure-noise Poisson(4) columns appended
/// to the gaussian view. The noise columns come from an independent stream,
/// so the base columns of both views are bit-identical to `make_planted`.
pub fn make_planted_with_noise(seed: u64, extra: usize) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = truth_labels();
    let base = gaussian_view(&mut rng, &labels);
    let counts = count_view(&mut rng, &labels);

    let mut noise_rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x6E0C_5D21));
    let mut gaussian = Array2::zeros((N_SAMPLES, GAUSSIAN_COLS + extra));
    gaussian
        .slice_mut(ndarray::s![.., ..GAUSSIAN_COLS])
        .assign(&base);
    for j in GAUSSIAN_COLS..GAUSSIAN_COLS + extra {
        for i in 0..N_SAMPLES {
            gaussian[[i, j]] = poisson(&mut noise_rng, COUNT_NOISE_RATE);
        }
    }
    assemble(gaussian, counts, seed)
}
