//! Command-line front end: CSV ingestion, per-class standardization, and the
//! run orchestration that writes estimates, edge lists, DOT graphs, and
//! summaries to an output directory.
//!
//! File formats are plain text throughout: CSV with a feature-name header for
//! matrices, TSV for edge lists and metrics, DOT for graphs, and JSON for the
//! run summary. Floats are written with 17 significant digits so parsing a
//! file back reproduces the in-memory values.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::dataset::{ClassDataset, DatasetError};
use crate::linalg::{empirical_cov, SymMatrix};
use crate::prox::{partial_corr_weights, PenaltyKind, PenaltySpec, ProxError};
use crate::screening::solve_with_screening;
use crate::select::{grid_search, AicReport, GridSpec, SearchMode, SelectError};
use crate::simgen::{
    run_experiment, ClassDiff, ClassStructure, ExperimentConfig, MetricsRow, NetworkSpec, SimError,
};
use crate::solver::{AdmmConfig, JglEstimate, ProblemInput, SolverError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        source: csv::Error,
    },
    #[error("{path} row {row}: expected {expected} values, found {got}")]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("{path} row {row}, column {col}: cannot parse {value:?} as a number")]
    NonNumeric {
        path: PathBuf,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("{path}: header mismatch at column {column}: expected {expected:?}, found {got:?}")]
    HeaderMismatch {
        path: PathBuf,
        column: usize,
        expected: String,
        got: String,
    },
    #[error("{path}: a class needs at least 2 observations, found {n}")]
    TooFewObservations { path: PathBuf, n: usize },
    #[error("column {name:?} has zero variance; cannot scale to unit standard deviation")]
    ZeroVariance { name: String },
    #[error("need at least one input file")]
    NoInputs,
    #[error("diagonal estimate file {path} has {got} entries, expected {expected}")]
    DiagLength {
        path: PathBuf,
        expected: usize,
        got: usize,
    },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Column transformation applied per class before covariance computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardizeMode {
    /// Subtract column means.
    Center,
    /// Subtract column means and divide by the standard deviation
    /// (the `1/n` convention, so the empirical covariance of the result has
    /// a unit diagonal).
    CenterScale,
}

/// Class weighting in the joint likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Weight each class by its sample size `n_k`.
    BySampleSize,
    /// Weight every class by 1 so no class dominates.
    Equal,
}

/// Where the diagonal estimate for partial-correlation penalty weights
/// comes from.
#[derive(Debug, Clone)]
pub enum PartialCorrSource {
    /// One value per line, `p` lines.
    File(PathBuf),
    /// Diagonal of a pooled single-class solve over all classes at this
    /// sparsity level.
    Pooled { lambda: f64 },
}

#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub p: usize,
    pub subnets: usize,
    pub classes: usize,
    pub n_per_class: usize,
    pub replicates: usize,
    /// Count of trailing subnetworks removed per class (block-reset mode).
    pub removed_per_class: Option<Vec<usize>>,
    pub branch_removal: bool,
    pub lambda1_grid: Vec<f64>,
    pub lambda2_grid: Vec<f64>,
    pub scale_by_n: bool,
}

#[derive(Debug, Clone)]
pub enum ModeConfig {
    Estimate,
    Select {
        lambda1_grid: Vec<f64>,
        lambda2_grid: Vec<f64>,
        search: SearchMode,
    },
    Simulate(SimulateConfig),
}

/// Everything one invocation needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: ModeConfig,
    pub penalty: PenaltyKind,
    pub lambda1: f64,
    pub lambda2: f64,
    pub rho: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub weighting: Weighting,
    pub standardize: StandardizeMode,
    pub partial_corr: Option<PartialCorrSource>,
    pub seed: u64,
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    fn admm(&self) -> AdmmConfig {
        AdmmConfig {
            rho: self.rho,
            tol: self.tol,
            max_iter: self.max_iter,
            track_objective: false,
        }
    }
}

/// Reads one CSV per class: a feature-name header row, then numeric
/// observation rows. All files must share the identical header, order
/// included. Blank lines are ignored.
pub fn load_classes(paths: &[PathBuf]) -> Result<Vec<ClassDataset>, CliError> {
    if paths.is_empty() {
        return Err(CliError::NoInputs);
    }
    let mut classes = Vec::with_capacity(paths.len());
    let mut reference: Option<Vec<String>> = None;
    for path in paths {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_path(path)
            .map_err(|source| CliError::Csv {
                path: path.clone(),
                source,
            })?;
        let names: Vec<String> = reader
            .headers()
            .map_err(|source| CliError::Csv {
                path: path.clone(),
                source,
            })?
            .iter()
            .map(|s| s.trim().to_string())
            .collect();
        if let Some(expected) = &reference {
            if names.len() != expected.len() {
                let column = names.len().min(expected.len());
                return Err(CliError::HeaderMismatch {
                    path: path.clone(),
                    column,
                    expected: expected.get(column).cloned().unwrap_or_default(),
                    got: names.get(column).cloned().unwrap_or_default(),
                });
            }
            for (column, (e, g)) in expected.iter().zip(names.iter()).enumerate() {
                if e != g {
                    return Err(CliError::HeaderMismatch {
                        path: path.clone(),
                        column,
                        expected: e.clone(),
                        got: g.clone(),
                    });
                }
            }
        } else {
            reference = Some(names.clone());
        }

        let p = names.len();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record.map_err(|source| CliError::Csv {
                path: path.clone(),
                source,
            })?;
            if record.iter().all(|f| f.trim().is_empty()) {
                continue;
            }
            if record.len() != p {
                return Err(CliError::RaggedRow {
                    path: path.clone(),
                    row: idx + 2,
                    expected: p,
                    got: record.len(),
                });
            }
            let mut row = Vec::with_capacity(p);
            for (col, field) in record.iter().enumerate() {
                let value: f64 = field.trim().parse().map_err(|_| CliError::NonNumeric {
                    path: path.clone(),
                    row: idx + 2,
                    col,
                    value: field.to_string(),
                })?;
                row.push(value);
            }
            rows.push(row);
        }
        if rows.len() < 2 {
            return Err(CliError::TooFewObservations {
                path: path.clone(),
                n: rows.len(),
            });
        }
        classes.push(ClassDataset::from_rows(names, rows)?);
    }
    Ok(classes)
}

/// Centers (and under [`StandardizeMode::CenterScale`] rescales) each column
/// within the class.
pub fn standardize(
    data: &ClassDataset,
    mode: StandardizeMode,
) -> Result<ClassDataset, CliError> {
    let p = data.n_features();
    let n = data.n_obs().max(1) as f64;
    let means: Vec<f64> = (0..p).map(|c| data.column_mean(c)).collect();
    match mode {
        StandardizeMode::Center => Ok(data.map_columns(|c, v| v - means[c])),
        StandardizeMode::CenterScale => {
            let mut sds = Vec::with_capacity(p);
            for c in 0..p {
                let var: f64 = (0..data.n_obs())
                    .map(|r| {
                        let d = data.value(r, c) - means[c];
                        d * d
                    })
                    .sum::<f64>()
                    / n;
                if var <= 0.0 {
                    return Err(CliError::ZeroVariance {
                        name: data.feature_names()[c].clone(),
                    });
                }
                sds.push(var.sqrt());
            }
            Ok(data.map_columns(|c, v| (v - means[c]) / sds[c]))
        }
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

struct OutputTracker {
    written: Vec<PathBuf>,
}

impl OutputTracker {
    fn write(&mut self, path: &Path, content: &str) -> Result<(), CliError> {
        self.written.push(path.to_path_buf());
        let mut f = std::fs::File::create(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        f.write_all(content.as_bytes()).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Serialize)]
struct CellSummary {
    lambda1: f64,
    lambda2: f64,
    aic: Option<f64>,
    edge_counts: Vec<usize>,
    converged: bool,
}

#[derive(Serialize)]
struct RunSummary {
    mode: String,
    penalty: String,
    lambda1: f64,
    lambda2: f64,
    rho: f64,
    tol: f64,
    max_iter: usize,
    weighting: String,
    classes: usize,
    features: usize,
    sample_sizes: Vec<usize>,
    iterations: usize,
    converged: bool,
    blocks: usize,
    edge_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<CellSummary>>,
}

#[derive(Serialize)]
struct SimulateSummary {
    mode: String,
    penalty: String,
    p: usize,
    subnets: usize,
    classes: usize,
    n_per_class: usize,
    replicates: usize,
    cells: usize,
    rows: usize,
    seed: u64,
}

/// Executes the configured run, writing all declared outputs into the output
/// directory. On any failure the files written so far are removed.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|source| CliError::Io {
        path: config.out_dir.clone(),
        source,
    })?;
    let mut tracker = OutputTracker {
        written: Vec::new(),
    };
    let result = run_inner(config, &mut tracker);
    if result.is_err() {
        for f in &tracker.written {
            let _ = std::fs::remove_file(f);
        }
    }
    result
}

fn run_inner(config: &RunConfig, tracker: &mut OutputTracker) -> Result<(), CliError> {
    match &config.mode {
        ModeConfig::Simulate(sim) => run_simulate(config, sim, tracker),
        ModeConfig::Estimate => run_estimate(config, None, tracker),
        ModeConfig::Select {
            lambda1_grid,
            lambda2_grid,
            search,
        } => {
            let grids = (lambda1_grid.clone(), lambda2_grid.clone(), *search);
            run_estimate(config, Some(grids), tracker)
        }
    }
}

fn build_problem(
    config: &RunConfig,
) -> Result<(ProblemInput, Vec<usize>, Vec<String>), CliError> {
    let raw = load_classes(&config.inputs)?;
    let names = raw[0].feature_names().to_vec();
    let sample_sizes: Vec<usize> = raw.iter().map(|d| d.n_obs()).collect();
    let standardized: Vec<ClassDataset> = raw
        .iter()
        .map(|d| standardize(d, config.standardize))
        .collect::<Result<_, _>>()?;
    let covs: Vec<SymMatrix> = standardized
        .iter()
        .map(|d| empirical_cov(d).map_err(SolverError::from))
        .collect::<Result<_, _>>()?;
    let weights: Vec<f64> = match config.weighting {
        Weighting::BySampleSize => sample_sizes.iter().map(|&n| n as f64).collect(),
        Weighting::Equal => vec![1.0; sample_sizes.len()],
    };

    let mut spec = PenaltySpec::new(config.penalty, config.lambda1, config.lambda2)?;
    if let Some(source) = &config.partial_corr {
        let diag = resolve_diag_estimate(source, &standardized, &covs, config)?;
        let w = partial_corr_weights(&diag)?;
        spec = spec.with_weights(Some(w.clone()), Some(w))?;
    }

    let input = ProblemInput::new(covs, weights, spec)?;
    Ok((input, sample_sizes, names))
}

/// Diagonal estimate for the partial-correlation weights: either read from a
/// one-column file or taken from the diagonal of a pooled single-class solve
/// over the concatenated (standardized) classes.
fn resolve_diag_estimate(
    source: &PartialCorrSource,
    standardized: &[ClassDataset],
    covs: &[SymMatrix],
    config: &RunConfig,
) -> Result<Vec<f64>, CliError> {
    let p = covs[0].dim();
    match source {
        PartialCorrSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let values: Vec<f64> = text
                .lines()
                .enumerate()
                .filter(|(_, line)| !line.trim().is_empty())
                .map(|(idx, line)| {
                    line.trim().parse().map_err(|_| CliError::NonNumeric {
                        path: path.clone(),
                        row: idx + 1,
                        col: 0,
                        value: line.trim().to_string(),
                    })
                })
                .collect::<Result<_, _>>()?;
            if values.len() != p {
                return Err(CliError::DiagLength {
                    path: path.clone(),
                    expected: p,
                    got: values.len(),
                });
            }
            Ok(values)
        }
        PartialCorrSource::Pooled { lambda } => {
            let total_n: usize = standardized.iter().map(|d| d.n_obs()).sum();
            let pooled = SymMatrix::from_fn(p, |i, j| {
                standardized
                    .iter()
                    .map(|d| {
                        empirical_cov(d).map(|s| s.get(i, j) * d.n_obs() as f64).unwrap_or(0.0)
                    })
                    .sum::<f64>()
                    / total_n as f64
            });
            let spec = PenaltySpec::new(PenaltyKind::Fgl, *lambda, 0.0)?;
            let input = ProblemInput::new(vec![pooled], vec![1.0], spec)?;
            let est = solve_with_screening(&input, &config.admm())?;
            Ok((0..p).map(|i| est.precision[0].get(i, i)).collect())
        }
    }
}

fn run_estimate(
    config: &RunConfig,
    grids: Option<(Vec<f64>, Vec<f64>, SearchMode)>,
    tracker: &mut OutputTracker,
) -> Result<(), CliError> {
    let (mut input, sample_sizes, names) = build_problem(config)?;
    let cfg = config.admm();

    let mut report: Option<AicReport> = None;
    let (lambda1, lambda2) = if let Some((g1, g2, search)) = grids {
        let grid = GridSpec::new(g1, g2, search)?;
        let r = grid_search(&input, &sample_sizes, &grid, &cfg)?;
        let best = r.best_cell();
        let pair = (best.lambda1, best.lambda2);
        report = Some(r);
        pair
    } else {
        (config.lambda1, config.lambda2)
    };

    input.spec = PenaltySpec::new(config.penalty, lambda1, lambda2)?
        .with_weights(None, None)?;
    if config.partial_corr.is_some() {
        // Rebuild weighted spec at the chosen lambdas.
        let raw = load_classes(&config.inputs)?;
        let standardized: Vec<ClassDataset> = raw
            .iter()
            .map(|d| standardize(d, config.standardize))
            .collect::<Result<_, _>>()?;
        let diag = resolve_diag_estimate(
            config.partial_corr.as_ref().unwrap(),
            &standardized,
            &input.covs,
            config,
        )?;
        let w = partial_corr_weights(&diag)?;
        input.spec = PenaltySpec::new(config.penalty, lambda1, lambda2)?
            .with_weights(Some(w.clone()), Some(w))?;
    }
    let est = solve_with_screening(&input, &cfg)?;

    write_estimate_outputs(config, &est, &names, tracker)?;

    let aic_value = report.as_ref().map(|r| r.best_cell().aic);
    let cells = report.map(|r| {
        r.cells
            .into_iter()
            .map(|c| CellSummary {
                lambda1: c.lambda1,
                lambda2: c.lambda2,
                aic: c.aic.is_finite().then_some(c.aic),
                edge_counts: c.edge_counts,
                converged: c.converged,
            })
            .collect::<Vec<_>>()
    });
    let summary = RunSummary {
        mode: if cells.is_some() { "select" } else { "estimate" }.to_string(),
        penalty: config.penalty.to_string(),
        lambda1,
        lambda2,
        rho: config.rho,
        tol: config.tol,
        max_iter: config.max_iter,
        weighting: match config.weighting {
            Weighting::BySampleSize => "by_sample_size".to_string(),
            Weighting::Equal => "equal".to_string(),
        },
        classes: est.n_classes(),
        features: est.dim(),
        sample_sizes,
        iterations: est.iterations,
        converged: est.converged,
        blocks: est.blocks,
        edge_counts: (0..est.n_classes()).map(|k| est.edge_count(k)).collect(),
        aic: aic_value,
        cells,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    tracker.write(&config.out_dir.join("summary.json"), &format!("{json}\n"))
}

fn write_estimate_outputs(
    config: &RunConfig,
    est: &JglEstimate,
    names: &[String],
    tracker: &mut OutputTracker,
) -> Result<(), CliError> {
    let p = est.dim();
    let k = est.n_classes();
    for class in 0..k {
        let z = &est.precision[class];
        let mut csv_text = String::new();
        csv_text.push_str(&names.join(","));
        csv_text.push('\n');
        for i in 0..p {
            let row: Vec<String> = (0..p).map(|j| fmt_float(z.get(i, j))).collect();
            csv_text.push_str(&row.join(","));
            csv_text.push('\n');
        }
        tracker.write(
            &config.out_dir.join(format!("precision_{}.csv", class + 1)),
            &csv_text,
        )?;

        let mut edges = String::from("feature_i\tfeature_j\tvalue\n");
        for i in 0..p {
            for j in (i + 1)..p {
                let v = z.get(i, j);
                if v != 0.0 {
                    edges.push_str(&format!("{}\t{}\t{}\n", names[i], names[j], fmt_float(v)));
                }
            }
        }
        tracker.write(
            &config.out_dir.join(format!("edges_{}.tsv", class + 1)),
            &edges,
        )?;

        let mut dot = String::from("graph {\n");
        for name in names {
            dot.push_str(&format!("  \"{name}\";\n"));
        }
        for i in 0..p {
            for j in (i + 1)..p {
                let v = z.get(i, j);
                if v != 0.0 {
                    dot.push_str(&format!(
                        "  \"{}\" -- \"{}\" [weight=\"{}\"];\n",
                        names[i],
                        names[j],
                        fmt_float(v)
                    ));
                }
            }
        }
        dot.push_str("}\n");
        tracker.write(
            &config.out_dir.join(format!("graph_{}.dot", class + 1)),
            &dot,
        )?;
    }

    if k == 2 {
        // Shared vs differential classification: exact equality for the
        // fused penalty (which can produce identical values), the 1e-2
        // threshold otherwise.
        let mut shared = String::from("feature_i\tfeature_j\tvalue_1\tvalue_2\n");
        let mut differential = String::from("feature_i\tfeature_j\tvalue_1\tvalue_2\n");
        for i in 0..p {
            for j in (i + 1)..p {
                let v1 = est.precision[0].get(i, j);
                let v2 = est.precision[1].get(i, j);
                if v1 == 0.0 && v2 == 0.0 {
                    continue;
                }
                let is_shared = match config.penalty {
                    PenaltyKind::Fgl => v1 == v2,
                    PenaltyKind::Ggl => {
                        v1 != 0.0
                            && v2 != 0.0
                            && (v1 - v2).abs() <= crate::simgen::DIFFERENTIAL_THRESHOLD
                    }
                };
                let line = format!(
                    "{}\t{}\t{}\t{}\n",
                    names[i],
                    names[j],
                    fmt_float(v1),
                    fmt_float(v2)
                );
                if is_shared {
                    shared.push_str(&line);
                } else {
                    differential.push_str(&line);
                }
            }
        }
        tracker.write(&config.out_dir.join("shared_edges.tsv"), &shared)?;
        tracker.write(&config.out_dir.join("differential_edges.tsv"), &differential)?;
    }
    Ok(())
}

fn run_simulate(
    config: &RunConfig,
    sim: &SimulateConfig,
    tracker: &mut OutputTracker,
) -> Result<(), CliError> {
    let structure = if sim.branch_removal {
        ClassStructure {
            classes: sim.classes,
            diff: ClassDiff::BranchRemoval,
        }
    } else {
        let counts = sim
            .removed_per_class
            .clone()
            .unwrap_or_else(|| (0..sim.classes).collect());
        if counts.len() != sim.classes {
            return Err(CliError::BadConfig(format!(
                "--removed-subnets needs {} entries, got {}",
                sim.classes,
                counts.len()
            )));
        }
        let removed = counts
            .iter()
            .map(|&c| ((sim.subnets - c)..sim.subnets).collect())
            .collect();
        ClassStructure {
            classes: sim.classes,
            diff: ClassDiff::SubnetReset(removed),
        }
    };
    let experiment = ExperimentConfig {
        network: NetworkSpec {
            p: sim.p,
            n_subnets: sim.subnets,
            edges_per_node: 1,
            seed: config.seed,
        },
        structure,
        n_per_class: sim.n_per_class,
        replicates: sim.replicates,
        penalty: config.penalty,
        lambda1_values: sim.lambda1_grid.clone(),
        lambda2_values: sim.lambda2_grid.clone(),
        scale_by_sample_size: sim.scale_by_n,
        admm: config.admm(),
        seed: config.seed,
    };
    let rows = run_experiment(&experiment)?;
    tracker.write(&config.out_dir.join("metrics.tsv"), &metrics_tsv(&rows))?;
    let summary = SimulateSummary {
        mode: "simulate".to_string(),
        penalty: config.penalty.to_string(),
        p: sim.p,
        subnets: sim.subnets,
        classes: sim.classes,
        n_per_class: sim.n_per_class,
        replicates: sim.replicates,
        cells: sim.lambda1_grid.len() * sim.lambda2_grid.len(),
        rows: rows.len(),
        seed: config.seed,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    tracker.write(&config.out_dir.join("summary.json"), &format!("{json}\n"))
}

/// Tab-separated metrics table, one row per `(replicate, lambda cell)`.
pub fn metrics_tsv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(
        "replicate\tpenalty\tlambda1\tlambda2\ttp_edges\tfp_edges\tsse\ttp_diff\tfp_diff\tdkl\titerations\tconverged\tblocks\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.replicate,
            r.penalty,
            fmt_float(r.lambda1),
            fmt_float(r.lambda2),
            r.tp_edges,
            r.fp_edges,
            fmt_float(r.sse),
            r.tp_diff,
            r.fp_diff,
            fmt_float(r.dkl),
            r.iterations,
            r.converged,
            r.blocks,
        ));
    }
    out
}
