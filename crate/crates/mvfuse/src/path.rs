//! Regularization-path sweeps: an η path with warm starts inside each
//! (β, θ, σ) cell, a full Cartesian grid search over cells, and probe-based
//! default grids that bracket the interesting regime.
//!
//! Cells are independent given the shared read-only dataset, graph, and
//! cached factorization, so they run concurrently (capped by the
//! `MVFUSE_THREADS` environment variable); the η points inside a cell stay
//! sequential because each warm-starts from the previous solution. Record
//! order is the deterministic grid traversal order (β outer, then θ, then σ,
//! with η innermost) regardless of thread scheduling.

use rayon::prelude::*;
use thiserror::Error;

use crate::data::{HyperParams, MultiViewDataset};
use crate::graph::FusionGraph;
use crate::metrics::{accuracy, ari, fmi, nmi, MetricsError};
use crate::solver::{solve, Diagnostics, SolverError, SolverState};

#[derive(Debug, Error)]
pub enum PathError {
    #[error("grid '{name}' is empty")]
    EmptyGrid { name: &'static str },
    #[error("grid '{name}' must be strictly increasing")]
    NonIncreasingGrid { name: &'static str },
    #[error("grid '{name}' contains out-of-range value {value}")]
    OutOfRangeGrid { name: &'static str, value: f64 },
    #[error("truth labels have length {found}, expected {expected}")]
    TruthLengthMismatch { expected: usize, found: usize },
    #[error(
        "no grid point selected: no truth labels given and {0}"
    )]
    NoSelection(&'static str, Box<PathResult>),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Grids to sweep. All grids must be non-empty and strictly increasing;
/// `target_k` drives best-point selection when no truth labels are given.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub eta_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
    pub target_k: Option<usize>,
}

impl PathSpec {
    /// A single-cell spec that sweeps only η, with β, θ, σ pinned at the
    /// base hyperparameters.
    pub fn eta_only(base: &HyperParams, eta_grid: Vec<f64>) -> Self {
        PathSpec {
            eta_grid,
            beta_grid: vec![base.beta],
            theta_grid: vec![base.theta],
            sigma_grid: vec![base.sigma],
            target_k: None,
        }
    }

    fn validate(&self) -> Result<(), PathError> {
        let grids: [(&'static str, &[f64]); 4] = [
            ("eta", &self.eta_grid),
            ("beta", &self.beta_grid),
            ("theta", &self.theta_grid),
            ("sigma", &self.sigma_grid),
        ];
        for (name, grid) in grids {
            if grid.is_empty() {
                return Err(PathError::EmptyGrid { name });
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(PathError::NonIncreasingGrid { name });
            }
            for &v in grid {
                let legal = match name {
                    "eta" | "beta" => v >= 0.0 && v.is_finite(),
                    "theta" => (0.0..=1.0).contains(&v),
                    "sigma" => v > 0.0 && v.is_finite(),
                    _ => unreachable!(),
                };
                if !legal {
                    return Err(PathError::OutOfRangeGrid { name, value: v });
                }
            }
        }
        Ok(())
    }
}

/// One (η, β, θ, σ) tuple of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub eta: f64,
    pub beta: f64,
    pub theta: f64,
    pub sigma: f64,
}

/// The four external metrics of a record against the supplied truth labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSet {
    pub accuracy: f64,
    pub nmi: f64,
    pub ari: f64,
    pub fmi: f64,
}

/// Successful solve at one grid point.
#[derive(Debug, Clone)]
pub struct SolvedRecord {
    /// 1-based partition labels (the η-path sequence of partitions lives in
    /// these, record by record).
    pub labels: Vec<usize>,
    pub n_clusters: usize,
    /// Per view, the 1-based selected column indices.
    pub selected_features: Vec<Vec<usize>>,
    /// Per view, the count of selected columns.
    pub selected_counts: Vec<usize>,
    pub metrics: Option<MetricSet>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub enum RecordOutcome {
    Solved(SolvedRecord),
    /// Solver failure at this point; the sweep continued.
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct PathRecord {
    pub point: GridPoint,
    pub outcome: RecordOutcome,
}

impl PathRecord {
    pub fn solved(&self) -> Option<&SolvedRecord> {
        match &self.outcome {
            RecordOutcome::Solved(rec) => Some(rec),
            RecordOutcome::Failed(_) => None,
        }
    }
}

/// All records of a sweep in grid traversal order, plus the selected best
/// record index when a selection rule applied.
#[derive(Debug, Clone)]
pub struct PathResult {
    pub records: Vec<PathRecord>,
    pub best: Option<usize>,
}

impl PathResult {
    pub fn best_record(&self) -> Option<&PathRecord> {
        self.best.map(|i| &self.records[i])
    }
}

/// Runs the η points of one (β, θ, σ) cell sequentially, warm-starting each
/// solve from the previous solution. A failed point is recorded and the
/// sweep continues from the last good state.
#[allow(clippy::too_many_arguments)]
fn run_cell(
    dataset: &MultiViewDataset,
    graph: &FusionGraph,
    base: &HyperParams,
    beta: f64,
    theta: f64,
    sigma: f64,
    eta_grid: &[f64],
    truth: Option<&[usize]>,
) -> Vec<PathRecord> {
    let mut records = Vec::with_capacity(eta_grid.len());
    let mut warm: Option<SolverState> = None;
    for &eta in eta_grid {
        let params = HyperParams {
            eta,
            beta,
            theta,
            sigma,
            ..base.clone()
        };
        let point = GridPoint {
            eta,
            beta,
            theta,
            sigma,
        };
        match solve(dataset, graph, &params, warm.as_ref()) {
            Ok((state, result)) => {
                let metrics = truth.map(|t| MetricSet {
                    accuracy: accuracy(t, &result.labels).expect("validated lengths"),
                    nmi: nmi(t, &result.labels).expect("validated lengths"),
                    ari: ari(t, &result.labels).expect("validated lengths"),
                    fmi: fmi(t, &result.labels).expect("validated lengths"),
                });
                records.push(PathRecord {
                    point,
                    outcome: RecordOutcome::Solved(SolvedRecord {
                        labels: result.labels,
                        n_clusters: result.n_clusters,
                        selected_counts: result
                            .selected_features
                            .iter()
                            .map(|s| s.len())
                            .collect(),
                        selected_features: result.selected_features,
                        metrics,
                        diagnostics: result.diagnostics,
                    }),
                });
                warm = Some(state);
            }
            Err(err) => {
                log::warn!("grid point {point:?} failed: {err}");
                records.push(PathRecord {
                    point,
                    outcome: RecordOutcome::Failed(err.to_string()),
                });
            }
        }
    }
    records
}

/// Sweeps the η grid at the base (β, θ, σ), warm-starting along the path.
/// Per-point solver failures are recorded in the result, not raised.
pub fn eta_path(
    dataset: &MultiViewDataset,
    graph: &FusionGraph,
    params: &HyperParams,
    eta_grid: &[f64],
) -> Result<PathResult, PathError> {
    let spec = PathSpec::eta_only(params, eta_grid.to_vec());
    spec.validate()?;
    let records = run_cell(
        dataset,
        graph,
        params,
        params.beta,
        params.theta,
        params.sigma,
        eta_grid,
        None,
    );
    Ok(PathResult {
        records,
        best: None,
    })
}

fn build_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("MVFUSE_THREADS") {
        match raw.parse::<usize>() {
            Ok(k) if k > 0 => builder = builder.num_threads(k),
            _ => log::warn!("ignoring MVFUSE_THREADS={raw:?}: expected a positive integer"),
        }
    }
    builder
        .build()
        .expect("thread pool construction only fails on resource exhaustion")
}

/// Full Cartesian sweep over (β, θ, σ) cells with the η path inside each.
///
/// Best-point rule: with `truth` labels, maximum ARI, ties broken by fewer
/// total selected features, then smaller η, then first in traversal order.
/// Without truth, the smallest-η point whose cluster count equals
/// `spec.target_k`; if no point qualifies (or no target was given) the sweep
/// is returned inside [`PathError::NoSelection`].
pub fn grid_search(
    dataset: &MultiViewDataset,
    graph: &FusionGraph,
    base_params: &HyperParams,
    spec: &PathSpec,
    truth: Option<&[usize]>,
) -> Result<PathResult, PathError> {
    spec.validate()?;
    if let Some(t) = truth {
        if t.len() != dataset.n_samples() {
            return Err(PathError::TruthLengthMismatch {
                expected: dataset.n_samples(),
                found: t.len(),
            });
        }
    }
    // Prime the shared factorization before fanning out so no cell pays for
    // it (first use is once-only under concurrency either way).
    let _ = crate::solver::graph_factorization(graph);
    let mut cells = Vec::new();
    for &beta in &spec.beta_grid {
        for &theta in &spec.theta_grid {
            for &sigma in &spec.sigma_grid {
                cells.push((beta, theta, sigma));
            }
        }
    }
    let pool = build_pool();
    let per_cell: Vec<Vec<PathRecord>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(beta, theta, sigma)| {
                run_cell(
                    dataset,
                    graph,
                    base_params,
                    beta,
                    theta,
                    sigma,
                    &spec.eta_grid,
                    truth,
                )
            })
            .collect()
    });
    let records: Vec<PathRecord> = per_cell.into_iter().flatten().collect();

    let best = if truth.is_some() {
        select_by_ari(&records)
    } else if let Some(k) = spec.target_k {
        select_by_target_k(&records, k)
    } else {
        return Err(PathError::NoSelection(
            "no target cluster count was requested",
            Box::new(PathResult {
                records,
                best: None,
            }),
        ));
    };
    match best {
        Some(_) => Ok(PathResult { records, best }),
        None => Err(PathError::NoSelection(
            "no grid point matched the requested cluster count",
            Box::new(PathResult {
                records,
                best: None,
            }),
        )),
    }
}

fn select_by_ari(records: &[PathRecord]) -> Option<usize> {
    let mut best: Option<(usize, f64, usize, f64)> = None; // (idx, ari, selected, eta)
    for (idx, record) in records.iter().enumerate() {
        let Some(rec) = record.solved() else { continue };
        let Some(m) = &rec.metrics else { continue };
        let selected: usize = rec.selected_counts.iter().sum();
        let candidate = (idx, m.ari, selected, record.point.eta);
        best = Some(match best {
            None => candidate,
            Some(cur) => {
                let better = candidate.1 > cur.1
                    || (candidate.1 == cur.1 && candidate.2 < cur.2)
                    || (candidate.1 == cur.1 && candidate.2 == cur.2 && candidate.3 < cur.3);
                if better {
                    candidate
                } else {
                    cur
                }
            }
        });
    }
    best.map(|(idx, ..)| idx)
}

fn select_by_target_k(records: &[PathRecord], k: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None; // (idx, eta)
    for (idx, record) in records.iter().enumerate() {
        let Some(rec) = record.solved() else { continue };
        if rec.n_clusters != k {
            continue;
        }
        let eta = record.point.eta;
        best = Some(match best {
            None => (idx, eta),
            Some(cur) if eta < cur.1 => (idx, eta),
            Some(cur) => cur,
        });
    }
    best.map(|(idx, _)| idx)
}

/// Geometric grid of `points` values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    let mut grid: Vec<f64> = (0..points).map(|i| lo * ratio.powi(i as i32)).collect();
    // Pin the last point to hi exactly despite rounding.
    grid[points - 1] = hi;
    grid
}

const PROBE_CAP: usize = 60;

/// Default η grid: doubling from 1, η_max is the smallest power of 2 whose
/// cold solve fuses everything into one cluster; η_min = η_max/10³; 50
/// logarithmically spaced points.
pub fn default_eta_grid(
    dataset: &MultiViewDataset,
    graph: &FusionGraph,
    params: &HyperParams,
) -> Result<Vec<f64>, PathError> {
    let mut eta_max = 1.0;
    for _ in 0..PROBE_CAP {
        let probe = HyperParams {
            eta: eta_max,
            ..params.clone()
        };
        let (_, result) = solve(dataset, graph, &probe, None)?;
        if result.n_clusters == 1 {
            return Ok(log_space(eta_max / 1e3, eta_max, 50));
        }
        eta_max *= 2.0;
    }
    log::warn!("eta probe hit its cap without reaching one cluster; grid may not bracket full fusion");
    Ok(log_space(eta_max / 1e3, eta_max, 50))
}

/// Default β grid: 20 logarithmic points between a halving-probe value with
/// full feature support and a doubling-probe value with empty support.
pub fn default_beta_grid(
    dataset: &MultiViewDataset,
    graph: &FusionGraph,
    params: &HyperParams,
) -> Result<Vec<f64>, PathError> {
    let total = dataset.n_features();
    let support_at = |beta: f64| -> Result<usize, PathError> {
        let probe = HyperParams {
            beta,
            ..params.clone()
        };
        let (_, result) = solve(dataset, graph, &probe, None)?;
        Ok(result.selected_features.iter().map(|s| s.len()).sum())
    };
    let mut lo = 1.0;
    let mut full = support_at(lo)? == total;
    for _ in 0..PROBE_CAP {
        if full {
            break;
        }
        lo /= 2.0;
        full = support_at(lo)? == total;
    }
    if !full {
        log::warn!("beta probe never reached full support; grid lower end may be conservative");
    }
    let mut hi = lo.max(1.0);
    let mut empty = support_at(hi)? == 0;
    for _ in 0..PROBE_CAP {
        if empty {
            break;
        }
        hi *= 2.0;
        empty = support_at(hi)? == 0;
    }
    if !empty {
        log::warn!("beta probe never emptied the support; grid upper end may be conservative");
    }
    Ok(log_space(lo, hi, 20))
}

/// Default θ grid: {2⁻⁸, 2⁻⁷, …, 2⁰}.
pub fn default_theta_grid() -> Vec<f64> {
    (0..=8).map(|i| 2f64.powi(i - 8)).collect()
}

/// Default σ grid: {0.1, 0.2, …, 1.5}.
pub fn default_sigma_grid() -> Vec<f64> {
    (1..=15).map(|i| i as f64 / 10.0).collect()
}
