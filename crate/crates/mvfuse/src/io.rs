//! File ingestion and result serialization: CSV matrices and label files,
//! the JSON run-configuration schema, and JSON result documents whose floats
//! carry 17 significant digits (round-trip exact).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{HyperParams, MultiViewDataset, View};
use crate::losses::LossKind;
use crate::path::{GridPoint, PathResult, PathSpec, RecordOutcome};
use crate::solver::ClusteringResult;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: file contains no data rows")]
    EmptyFile { path: PathBuf },
    #[error("{path}:{line}: row has {found} fields, expected {expected}")]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}:{column}: cannot parse {field:?} as a number")]
    ParseError {
        path: PathBuf,
        line: usize,
        column: usize,
        field: String,
    },
    #[error("{path}: invalid config: {message}")]
    BadConfig { path: PathBuf, message: String },
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a CSV matrix: rows are samples, columns are features. A single
/// header row is auto-detected (any non-numeric field in the first non-empty
/// line) and skipped; blank lines are ignored; ragged rows and unparsable
/// fields are reported with 1-based line/column numbers.
pub fn load_view_csv(path: &Path) -> Result<Array2<f64>, IoError> {
    let text = read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected_cols: Option<usize> = None;
    let mut first_content_line = true;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if first_content_line {
            first_content_line = false;
            expected_cols = Some(fields.len());
            if fields.iter().any(|f| f.parse::<f64>().is_err()) {
                continue; // header row
            }
        }
        let expected = expected_cols.expect("set on first content line");
        if fields.len() != expected {
            return Err(IoError::RaggedRow {
                path: path.to_path_buf(),
                line: line_no,
                expected,
                found: fields.len(),
            });
        }
        let mut row = Vec::with_capacity(expected);
        for (col_idx, field) in fields.iter().enumerate() {
            let value = field.parse::<f64>().map_err(|_| IoError::ParseError {
                path: path.to_path_buf(),
                line: line_no,
                column: col_idx + 1,
                field: (*field).to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    let Some(ncols) = expected_cols.filter(|_| !rows.is_empty()) else {
        return Err(IoError::EmptyFile {
            path: path.to_path_buf(),
        });
    };
    let nrows = rows.len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(Array2::from_shape_vec((nrows, ncols), flat).expect("row lengths were checked"))
}

/// Loads a label file (one integer per line, blank lines ignored) and remaps
/// the values to dense 0-based ids in ascending value order. All metrics are
/// relabel-invariant, so the remap never changes a score.
pub fn load_labels_csv(path: &Path) -> Result<Vec<usize>, IoError> {
    let text = read_to_string(path)?;
    let mut raw: Vec<i64> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let value = line.parse::<i64>().map_err(|_| IoError::ParseError {
            path: path.to_path_buf(),
            line: idx + 1,
            column: 1,
            field: line.to_string(),
        })?;
        raw.push(value);
    }
    if raw.is_empty() {
        return Err(IoError::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let mut sorted: Vec<i64> = raw.clone();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(raw
        .iter()
        .map(|v| sorted.binary_search(v).expect("value is present"))
        .collect())
}

/// One view entry of a run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewConfig {
    pub path: PathBuf,
    pub loss: LossKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_weights: Option<Vec<f64>>,
}

/// Optional sweep grids for the `path` subcommand. A missing η grid is
/// probed from the data; missing β/θ/σ grids pin the base hyperparameter.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpecConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_k: Option<usize>,
}

impl PathSpecConfig {
    /// Resolves the optional grids into a concrete [`PathSpec`]: a missing η
    /// grid is probed from the data ([`crate::path::default_eta_grid`]);
    /// missing β/θ/σ grids pin the corresponding base hyperparameter.
    pub fn resolve(
        &self,
        dataset: &MultiViewDataset,
        graph: &crate::graph::FusionGraph,
        params: &HyperParams,
    ) -> Result<PathSpec, crate::path::PathError> {
        let eta_grid = match &self.eta_grid {
            Some(grid) => grid.clone(),
            None => crate::path::default_eta_grid(dataset, graph, params)?,
        };
        Ok(PathSpec {
            eta_grid,
            beta_grid: self.beta_grid.clone().unwrap_or_else(|| vec![params.beta]),
            theta_grid: self
                .theta_grid
                .clone()
                .unwrap_or_else(|| vec![params.theta]),
            sigma_grid: self
                .sigma_grid
                .clone()
                .unwrap_or_else(|| vec![params.sigma]),
            target_k: self.target_k,
        })
    }
}

/// The run configuration file. Unknown keys are rejected; `output_path` is
/// required. Relative paths are resolved against the config file's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub views: Vec<ViewConfig>,
    #[serde(default)]
    pub hyperparameters: HyperParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_spec: Option<PathSpecConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_labels_path: Option<PathBuf>,
    pub output_path: PathBuf,
}

/// Parses and schema-validates a run configuration file.
pub fn load_run_config(path: &Path) -> Result<RunConfig, IoError> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| IoError::BadConfig {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Resolves a possibly-relative configured path against the config file's
/// directory.
pub fn resolve_path(base_dir: &Path, configured: &Path) -> PathBuf {
    if configured.is_absolute() {
        configured.to_path_buf()
    } else {
        base_dir.join(configured)
    }
}

/// Loads every configured view matrix and builds the `View` list in config
/// order.
pub fn load_views(config: &RunConfig, base_dir: &Path) -> Result<Vec<View>, IoError> {
    let mut views = Vec::with_capacity(config.views.len());
    for vc in &config.views {
        let matrix = load_view_csv(&resolve_path(base_dir, &vc.path))?;
        let mut view = View::new(matrix, vc.loss);
        if let Some(w) = vc.weight {
            view = view.with_weight(w);
        }
        if let Some(fw) = &vc.feature_weights {
            view = view.with_feature_weights(fw.clone());
        }
        views.push(view);
    }
    Ok(views)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualsDocument {
    pub primal: f64,
    pub dual: f64,
}

/// The JSON document written by the `cluster` subcommand. All indices are
/// 1-based; floats are serialized with 17 significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub labels: Vec<usize>,
    pub n_clusters: usize,
    pub selected_features: Vec<Vec<usize>>,
    pub iterations: usize,
    pub residuals: ResidualsDocument,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    pub hyperparameters: HyperParams,
}

impl ResultDocument {
    pub fn from_result(result: &ClusteringResult, params: &HyperParams) -> Self {
        ResultDocument {
            labels: result.labels.clone(),
            n_clusters: result.n_clusters,
            selected_features: result.selected_features.clone(),
            iterations: result.diagnostics.iterations,
            residuals: ResidualsDocument {
                primal: result.diagnostics.primal_residual,
                dual: result.diagnostics.dual_residual,
            },
            objective_trace: result.diagnostics.objective_trace(),
            converged: result.diagnostics.converged,
            hyperparameters: params.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsDocument {
    pub accuracy: f64,
    pub nmi: f64,
    pub ari: f64,
    pub fmi: f64,
}

/// One sweep record in the `path` subcommand's output: the grid point plus
/// either the solved summary or the failure message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecordDocument {
    pub eta: f64,
    pub beta: f64,
    pub theta: f64,
    pub sigma: f64,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_clusters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_counts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_features: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualsDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
}

/// Identifies the selected best record: its 1-based position in `records`
/// plus the winning hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestPointDocument {
    pub index: usize,
    pub eta: f64,
    pub beta: f64,
    pub theta: f64,
    pub sigma: f64,
}

/// The JSON document written by the `path` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDocument {
    pub records: Vec<PathRecordDocument>,
    pub best: Option<BestPointDocument>,
}

impl PathDocument {
    pub fn from_path_result(result: &PathResult) -> Self {
        let records = result
            .records
            .iter()
            .map(|record| {
                let GridPoint {
                    eta,
                    beta,
                    theta,
                    sigma,
                } = record.point;
                match &record.outcome {
                    RecordOutcome::Solved(rec) => PathRecordDocument {
                        eta,
                        beta,
                        theta,
                        sigma,
                        status: "solved".to_string(),
                        error: None,
                        labels: Some(rec.labels.clone()),
                        n_clusters: Some(rec.n_clusters),
                        selected_counts: Some(rec.selected_counts.clone()),
                        selected_features: Some(rec.selected_features.clone()),
                        metrics: rec.metrics.map(|m| MetricsDocument {
                            accuracy: m.accuracy,
                            nmi: m.nmi,
                            ari: m.ari,
                            fmi: m.fmi,
                        }),
                        iterations: Some(rec.diagnostics.iterations),
                        residuals: Some(ResidualsDocument {
                            primal: rec.diagnostics.primal_residual,
                            dual: rec.diagnostics.dual_residual,
                        }),
                        converged: Some(rec.diagnostics.converged),
                    },
                    RecordOutcome::Failed(message) => PathRecordDocument {
                        eta,
                        beta,
                        theta,
                        sigma,
                        status: "failed".to_string(),
                        error: Some(message.clone()),
                        labels: None,
                        n_clusters: None,
                        selected_counts: None,
                        selected_features: None,
                        metrics: None,
                        iterations: None,
                        residuals: None,
                        converged: None,
                    },
                }
            })
            .collect();
        let best = result.best.map(|idx| {
            let point = result.records[idx].point;
            BestPointDocument {
                index: idx + 1,
                eta: point.eta,
                beta: point.beta,
                theta: point.theta,
                sigma: point.sigma,
            }
        });
        PathDocument { records, best }
    }
}

/// JSON formatter that renders every finite f64 as `{:.16e}` — 17
/// significant digits, enough for exact round-tripping.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any document to compact JSON with 17-significant-digit floats,
/// terminated by a newline.
pub fn to_json_bytes<T: Serialize>(document: &T) -> Vec<u8> {
    let mut bytes = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut bytes, SciFormatter);
    document
        .serialize(&mut serializer)
        .expect("in-memory JSON serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let mut file = fs::File::create(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(bytes).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the `cluster` result document to `path`.
pub fn write_result(
    result: &ClusteringResult,
    params: &HyperParams,
    path: &Path,
) -> Result<(), IoError> {
    let document = ResultDocument::from_result(result, params);
    write_bytes(path, &to_json_bytes(&document))
}

/// Writes the `path` sweep document to `path`.
pub fn write_path_result(result: &PathResult, path: &Path) -> Result<(), IoError> {
    let document = PathDocument::from_path_result(result);
    write_bytes(path, &to_json_bytes(&document))
}
