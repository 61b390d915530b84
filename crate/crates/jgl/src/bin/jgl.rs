//! Command-line interface for joint graphical model estimation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jgl::cli::{
    run, ModeConfig, PartialCorrSource, RunConfig, SimulateConfig, StandardizeMode, Weighting,
};
use jgl::prox::PenaltyKind;
use jgl::select::SearchMode;

#[derive(Parser)]
#[command(
    name = "jgl",
    about = "Joint estimation of sparse Gaussian graphical models across classes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyArg {
    Fgl,
    Ggl,
}

impl From<PenaltyArg> for PenaltyKind {
    fn from(p: PenaltyArg) -> Self {
        match p {
            PenaltyArg::Fgl => PenaltyKind::Fgl,
            PenaltyArg::Ggl => PenaltyKind::Ggl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StandardizeArg {
    /// Subtract per-class column means.
    Center,
    /// Center and scale each column to unit standard deviation.
    CenterSd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    Full,
    DenseL1,
}

#[derive(Args)]
struct CommonOpts {
    /// Coupling penalty across classes.
    #[arg(long, value_enum, default_value = "fgl")]
    penalty: PenaltyArg,
    /// Sparsity tuning parameter.
    #[arg(long, default_value_t = 0.1)]
    lambda1: f64,
    /// Similarity tuning parameter.
    #[arg(long, default_value_t = 0.0)]
    lambda2: f64,
    /// ADMM augmented-Lagrangian parameter.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Primal convergence tolerance.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    /// Iteration cap per block solve.
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Weight classes equally instead of by sample size.
    #[arg(long)]
    equal_weights: bool,
    /// Per-class column standardization.
    #[arg(long, value_enum, default_value = "center")]
    standardize: StandardizeArg,
    /// Penalize on the partial-correlation scale. Pass a one-column file of
    /// p diagonal estimates, or `pooled:<lambda>` to estimate the diagonal
    /// from a pooled single-class solve at that sparsity level.
    #[arg(long, value_name = "FILE|pooled:LAMBDA")]
    partial_corr_diag: Option<String>,
    /// Seed for anything stochastic.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate precision matrices at fixed tuning parameters.
    Estimate {
        #[command(flatten)]
        common: CommonOpts,
        /// One CSV per class (feature-name header, observation rows).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Grid search over tuning parameters by AIC, then estimate at the best.
    Select {
        #[command(flatten)]
        common: CommonOpts,
        /// lambda1 candidates, as `a:b:step`, a comma list, or one value.
        #[arg(long, value_name = "GRID")]
        lambda1_grid: String,
        /// lambda2 candidates, same formats.
        #[arg(long, value_name = "GRID")]
        lambda2_grid: String,
        /// Full grid or dense-lambda1-then-lambda2.
        #[arg(long, value_enum, default_value = "full")]
        search: SearchArg,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Generate synthetic benchmarks and emit a metrics table.
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of features.
        #[arg(long, default_value_t = 100)]
        p: usize,
        /// Number of equal-sized unconnected subnetworks.
        #[arg(long, default_value_t = 10)]
        subnets: usize,
        /// Number of classes.
        #[arg(long, default_value_t = 2)]
        classes: usize,
        /// Observations per class.
        #[arg(long, default_value_t = 150)]
        n_per_class: usize,
        /// Independent replicates.
        #[arg(long, default_value_t = 10)]
        replicates: usize,
        /// Per class, how many trailing subnetworks to drop (comma list,
        /// default 0,1,2,...).
        #[arg(long, value_name = "LIST")]
        removed_subnets: Option<String>,
        /// Remove one network branch in class 2 on the precision scale
        /// instead of resetting subnetwork blocks.
        #[arg(long)]
        branch_removal: bool,
        /// lambda1 candidates, as `a:b:step`, a comma list, or one value.
        #[arg(long, value_name = "GRID")]
        lambda1_grid: String,
        /// lambda2 candidates, same formats.
        #[arg(long, value_name = "GRID")]
        lambda2_grid: String,
        /// Multiply tuning parameters by the per-class sample size.
        #[arg(long)]
        scale_by_n: bool,
    },
}

fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    let parse_one = |s: &str| -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {s:?} as a number"))
    };
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid range must be a:b:step, got {text:?}"));
        }
        let (a, b, step) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step <= 0.0 {
            return Err("grid step must be positive".to_string());
        }
        let mut values = Vec::new();
        let mut i = 0usize;
        loop {
            let v = a + step * i as f64;
            if v > b + step * 1e-9 {
                break;
            }
            values.push(v);
            i += 1;
        }
        values
    } else if text.contains(',') {
        text.split(',').map(parse_one).collect::<Result<_, _>>()?
    } else {
        vec![parse_one(text)?]
    };
    if values.is_empty() {
        return Err(format!("grid {text:?} is empty"));
    }
    Ok(values)
}

fn parse_partial_corr(text: &str) -> Result<PartialCorrSource, String> {
    if let Some(rest) = text.strip_prefix("pooled:") {
        let lambda: f64 = rest
            .parse()
            .map_err(|_| format!("cannot parse pooled lambda {rest:?}"))?;
        if lambda < 0.0 {
            return Err("pooled lambda must be nonnegative".to_string());
        }
        Ok(PartialCorrSource::Pooled { lambda })
    } else {
        Ok(PartialCorrSource::File(PathBuf::from(text)))
    }
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("cannot parse {s:?} as a count"))
        })
        .collect()
}

fn build_config(
    common: CommonOpts,
    mode: ModeConfig,
    inputs: Vec<PathBuf>,
) -> Result<RunConfig, String> {
    let partial_corr = common
        .partial_corr_diag
        .as_deref()
        .map(parse_partial_corr)
        .transpose()?;
    Ok(RunConfig {
        mode,
        penalty: common.penalty.into(),
        lambda1: common.lambda1,
        lambda2: common.lambda2,
        rho: common.rho,
        tol: common.tol,
        max_iter: common.max_iter,
        weighting: if common.equal_weights {
            Weighting::Equal
        } else {
            Weighting::BySampleSize
        },
        standardize: match common.standardize {
            StandardizeArg::Center => StandardizeMode::Center,
            StandardizeArg::CenterSd => StandardizeMode::CenterScale,
        },
        partial_corr,
        seed: common.seed,
        inputs,
        out_dir: common.out.clone(),
    })
}

fn execute() -> Result<(), String> {
    let cli = Cli::parse();
    let config = match cli.command {
        Command::Estimate { common, inputs } => build_config(common, ModeConfig::Estimate, inputs)?,
        Command::Select {
            common,
            lambda1_grid,
            lambda2_grid,
            search,
            inputs,
        } => {
            let mode = ModeConfig::Select {
                lambda1_grid: parse_grid(&lambda1_grid)?,
                lambda2_grid: parse_grid(&lambda2_grid)?,
                search: match search {
                    SearchArg::Full => SearchMode::FullGrid,
                    SearchArg::DenseL1 => SearchMode::DenseL1ThenL2,
                },
            };
            build_config(common, mode, inputs)?
        }
        Command::Simulate {
            common,
            p,
            subnets,
            classes,
            n_per_class,
            replicates,
            removed_subnets,
            branch_removal,
            lambda1_grid,
            lambda2_grid,
            scale_by_n,
        } => {
            let sim = SimulateConfig {
                p,
                subnets,
                classes,
                n_per_class,
                replicates,
                removed_per_class: removed_subnets
                    .as_deref()
                    .map(parse_usize_list)
                    .transpose()?,
                branch_removal,
                lambda1_grid: parse_grid(&lambda1_grid)?,
                lambda2_grid: parse_grid(&lambda2_grid)?,
                scale_by_n,
            };
            build_config(common, ModeConfig::Simulate(sim), Vec::new())?
        }
    };
    run(&config).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
