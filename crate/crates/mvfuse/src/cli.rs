//! Command-line interface: `cluster`, `path`, `metrics`, and `graph`
//! subcommands over JSON run configurations.
//!
//! Exit codes: 0 on success (including runs that stop at the iteration cap,
//! which report `converged: false` in the output document), 1 on validation
//! errors (bad arguments, configs, or input files), 2 on runtime errors
//! (solver failures, unwritable output). Diagnostics go to stderr; only the
//! `metrics` subcommand prints to stdout.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::data::{assemble_dataset, MultiViewDataset};
use crate::graph::{build_graph, FusionGraph};
use crate::io::{
    load_labels_csv, load_run_config, load_views, resolve_path, write_path_result, write_result,
    RunConfig,
};
use crate::metrics::{accuracy, ari, fmi, nmi};
use crate::path::{grid_search, PathError};
use crate::solver::{solve, SolverError};

#[derive(Parser)]
#[command(
    name = "mvfuse",
    version,
    about = "Fusion-regularized clustering of multi-view mixed-type data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one clustering solve from a JSON config and write the result document.
    Cluster {
        /// Path to the run-configuration JSON file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Sweep regularization grids (warm-started η path per cell) and write all records.
    Path {
        /// Path to the run-configuration JSON file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Print ACC/NMI/ARI/FMI between two label files (one integer per line).
    Metrics {
        /// Ground-truth label file.
        #[arg(long)]
        truth: PathBuf,
        /// Predicted label file.
        #[arg(long)]
        pred: PathBuf,
    },
    /// Build the sample fusion graph and write its weighted edge list.
    Graph {
        /// Path to the run-configuration JSON file.
        #[arg(long)]
        config: PathBuf,
    },
}

enum CliFailure {
    Validation(String),
    Runtime(String),
}

impl CliFailure {
    fn validation(err: impl std::fmt::Display) -> Self {
        CliFailure::Validation(err.to_string())
    }
    fn runtime(err: impl std::fmt::Display) -> Self {
        CliFailure::Runtime(err.to_string())
    }
}

fn from_solver_error(err: SolverError) -> CliFailure {
    match err {
        // Parameter validation is an input problem, not a runtime one.
        SolverError::Params(e) => CliFailure::validation(e),
        other => CliFailure::runtime(other),
    }
}

fn from_path_error(err: PathError) -> CliFailure {
    match err {
        PathError::Solver(e) => from_solver_error(e),
        PathError::NoSelection(..) => {
            unreachable!("NoSelection is handled before error mapping")
        }
        validation => CliFailure::validation(validation),
    }
}

/// Loads the config, view matrices, dataset, and graph shared by the
/// config-driven subcommands.
fn prepare(
    config_path: &Path,
) -> Result<(RunConfig, PathBuf, MultiViewDataset, FusionGraph), CliFailure> {
    let config = load_run_config(config_path).map_err(CliFailure::validation)?;
    let base_dir = config_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    let views = load_views(&config, &base_dir).map_err(CliFailure::validation)?;
    let dataset = assemble_dataset(views).map_err(CliFailure::validation)?;
    let params = &config.hyperparameters;
    params
        .validate(dataset.n_samples())
        .map_err(CliFailure::validation)?;
    let graph =
        build_graph(&dataset, params.k_neighbors, params.phi).map_err(CliFailure::validation)?;
    Ok((config, base_dir, dataset, graph))
}

fn run_cluster(config_path: &Path) -> Result<(), CliFailure> {
    let (config, base_dir, dataset, graph) = prepare(config_path)?;
    let params = &config.hyperparameters;
    let (_, result) = solve(&dataset, &graph, params, None).map_err(from_solver_error)?;
    if !result.diagnostics.converged {
        eprintln!(
            "warning: iteration cap reached ({} iterations); result written with converged=false",
            result.diagnostics.iterations
        );
    }
    let out = resolve_path(&base_dir, &config.output_path);
    write_result(&result, params, &out).map_err(CliFailure::runtime)
}

fn run_path(config_path: &Path) -> Result<(), CliFailure> {
    let (config, base_dir, dataset, graph) = prepare(config_path)?;
    let params = &config.hyperparameters;
    let truth: Option<Vec<usize>> = match &config.truth_labels_path {
        Some(p) => Some(
            load_labels_csv(&resolve_path(&base_dir, p)).map_err(CliFailure::validation)?,
        ),
        None => None,
    };
    let spec = config
        .path_spec
        .clone()
        .unwrap_or_default()
        .resolve(&dataset, &graph, params)
        .map_err(from_path_error)?;
    let out = resolve_path(&base_dir, &config.output_path);
    match grid_search(&dataset, &graph, params, &spec, truth.as_deref()) {
        Ok(result) => write_path_result(&result, &out).map_err(CliFailure::runtime),
        Err(PathError::NoSelection(reason, sweep)) => {
            eprintln!("warning: no best grid point selected: {reason}; records written with best=null");
            write_path_result(&sweep, &out).map_err(CliFailure::runtime)
        }
        Err(other) => Err(from_path_error(other)),
    }
}

fn run_metrics(truth_path: &Path, pred_path: &Path) -> Result<(), CliFailure> {
    let truth = load_labels_csv(truth_path).map_err(CliFailure::validation)?;
    let pred = load_labels_csv(pred_path).map_err(CliFailure::validation)?;
    let acc = accuracy(&truth, &pred).map_err(CliFailure::validation)?;
    let nmi_v = nmi(&truth, &pred).map_err(CliFailure::validation)?;
    let ari_v = ari(&truth, &pred).map_err(CliFailure::validation)?;
    let fmi_v = fmi(&truth, &pred).map_err(CliFailure::validation)?;
    println!("acc={acc:.6}");
    println!("nmi={nmi_v:.6}");
    println!("ari={ari_v:.6}");
    println!("fmi={fmi_v:.6}");
    Ok(())
}

fn run_graph(config_path: &Path) -> Result<(), CliFailure> {
    let (config, base_dir, _dataset, graph) = prepare(config_path)?;
    let mut text = String::from("i,i_prime,omega\n");
    for (&(i, j), &w) in graph.edges().iter().zip(graph.weights().iter()) {
        writeln!(text, "{},{},{:.16e}", i + 1, j + 1, w).expect("string write cannot fail");
    }
    let out = resolve_path(&base_dir, &config.output_path);
    std::fs::write(&out, text).map_err(|e| CliFailure::runtime(format!("{}: {e}", out.display())))
}

/// Entry point shared by the binary and tests: parses `argv`, runs the
/// subcommand, and returns the process exit code (0 success, 1 validation
/// error, 2 runtime error).
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    1
                }
            };
        }
    };
    let outcome = match &cli.command {
        Command::Cluster { config } => run_cluster(config),
        Command::Path { config } => run_path(config),
        Command::Metrics { truth, pred } => run_metrics(truth, pred),
        Command::Graph { config } => run_graph(config),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliFailure::Validation(message)) => {
            eprintln!("error: {message}");
            1
        }
        Err(CliFailure::Runtime(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}
