//! Tuning-parameter selection: AIC scoring over a grid of penalty values.

use rayon::prelude::*;

use crate::linalg::SymMatrix;
use crate::prox::PenaltySpec;
use crate::screening::solve_with_screening;
use crate::solver::{AdmmConfig, JglEstimate, ProblemInput, SolverError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("estimated precision for class {class} is not positive definite")]
    NotPositiveDefinite { class: usize },
    #[error("expected {expected} sample sizes, got {got}")]
    SampleSizeMismatch { expected: usize, got: usize },
    #[error("grid must contain at least one value per parameter")]
    EmptyGrid,
    #[error("no grid cell produced a converged, scoreable estimate")]
    NoViableCell,
}

/// How to traverse the `(lambda1, lambda2)` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every `(lambda1, lambda2)` combination.
    FullGrid,
    /// Dense scan over `lambda1` at the smallest `lambda2`, then a scan over
    /// `lambda2` at the winning `lambda1`. Cheaper on big grids.
    DenseL1ThenL2,
}

/// Grid of candidate penalty values.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub lambda1_values: Vec<f64>,
    pub lambda2_values: Vec<f64>,
    pub search_mode: SearchMode,
}

impl GridSpec {
    pub fn new(
        mut lambda1_values: Vec<f64>,
        mut lambda2_values: Vec<f64>,
        search_mode: SearchMode,
    ) -> Result<Self, SelectError> {
        if lambda1_values.is_empty() || lambda2_values.is_empty() {
            return Err(SelectError::EmptyGrid);
        }
        lambda1_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lambda2_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self {
            lambda1_values,
            lambda2_values,
            search_mode,
        })
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone)]
pub struct AicCell {
    pub lambda1: f64,
    pub lambda2: f64,
    /// NaN when the cell could not be scored.
    pub aic: f64,
    pub edge_counts: Vec<usize>,
    pub converged: bool,
}

/// All evaluated cells plus the index of the AIC minimizer.
#[derive(Debug, Clone)]
pub struct AicReport {
    pub cells: Vec<AicCell>,
    pub best: usize,
}

impl AicReport {
    pub fn best_cell(&self) -> &AicCell {
        &self.cells[self.best]
    }
}

/// AIC approximation:
/// `sum_k [ n_k trace(S_k T_k) - n_k log det T_k + 2 E_k ]`,
/// where `E_k` counts the nonzero entries of the full symmetric estimate,
/// diagonal included. Sample sizes are the true `n_k` even when the solve
/// weighted classes equally.
pub fn aic(
    covs: &[SymMatrix],
    sample_sizes: &[usize],
    estimate: &JglEstimate,
) -> Result<f64, SelectError> {
    if sample_sizes.len() != covs.len() {
        return Err(SelectError::SampleSizeMismatch {
            expected: covs.len(),
            got: sample_sizes.len(),
        });
    }
    let mut total = 0.0;
    for (k, (cov, theta)) in covs.iter().zip(estimate.precision.iter()).enumerate() {
        let n = sample_sizes[k] as f64;
        let log_det = theta
            .log_det_pd()
            .map_err(|_| SelectError::NotPositiveDefinite { class: k })?;
        let e_k = estimate.nonzero_count(k) as f64;
        total += n * cov.trace_product(theta) - n * log_det + 2.0 * e_k;
    }
    Ok(total)
}

/// Evaluates the grid with screened solves and returns per-cell AIC scores.
/// Cells that fail to converge (or whose estimate cannot be scored) are kept
/// in the report with `converged = false` and a NaN score.
pub fn grid_search(
    input: &ProblemInput,
    sample_sizes: &[usize],
    grid: &GridSpec,
    cfg: &AdmmConfig,
) -> Result<AicReport, SelectError> {
    input.validate()?;
    if sample_sizes.len() != input.n_classes() {
        return Err(SelectError::SampleSizeMismatch {
            expected: input.n_classes(),
            got: sample_sizes.len(),
        });
    }

    let evaluate = |cells: &[(f64, f64)]| -> Result<Vec<AicCell>, SelectError> {
        cells
            .par_iter()
            .map(|&(l1, l2)| {
                let spec = PenaltySpec::new(input.spec.kind(), l1, l2)
                    .map_err(SolverError::from)?;
                let sub = ProblemInput {
                    covs: input.covs.clone(),
                    weights: input.weights.clone(),
                    spec,
                };
                let est = solve_with_screening(&sub, cfg)?;
                let edge_counts = (0..est.n_classes()).map(|k| est.edge_count(k)).collect();
                let score = if est.converged {
                    aic(&input.covs, sample_sizes, &est).ok()
                } else {
                    None
                };
                Ok(AicCell {
                    lambda1: l1,
                    lambda2: l2,
                    aic: score.unwrap_or(f64::NAN),
                    edge_counts,
                    converged: est.converged && score.is_some(),
                })
            })
            .collect()
    };

    let best_of = |cells: &[AicCell]| -> Option<usize> {
        cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.converged && c.aic.is_finite())
            .min_by(|(_, a), (_, b)| a.aic.partial_cmp(&b.aic).unwrap())
            .map(|(i, _)| i)
    };

    let cells = match grid.search_mode {
        SearchMode::FullGrid => {
            let mut pairs = Vec::new();
            for &l1 in &grid.lambda1_values {
                for &l2 in &grid.lambda2_values {
                    pairs.push((l1, l2));
                }
            }
            evaluate(&pairs)?
        }
        SearchMode::DenseL1ThenL2 => {
            let l2_floor = grid.lambda2_values[0];
            let first: Vec<(f64, f64)> = grid
                .lambda1_values
                .iter()
                .map(|&l1| (l1, l2_floor))
                .collect();
            let mut cells = evaluate(&first)?;
            let best_l1 = best_of(&cells)
                .map(|i| cells[i].lambda1)
                .ok_or(SelectError::NoViableCell)?;
            let second: Vec<(f64, f64)> = grid
                .lambda2_values
                .iter()
                .skip(1)
                .map(|&l2| (best_l1, l2))
                .collect();
            cells.extend(evaluate(&second)?);
            cells
        }
    };

    let best = best_of(&cells).ok_or(SelectError::NoViableCell)?;
    Ok(AicReport { cells, best })
}

/// Reparametrization separating "sparsity" from "similarity" for the group
/// penalty: `omega1 = lambda1 + lambda2 / sqrt(2)` and
/// `omega2 = (lambda2 / sqrt(2)) / omega1`, with `(0,0) -> (0,0)`.
pub fn ggl_reparam(lambda1: f64, lambda2: f64) -> (f64, f64) {
    let scaled = lambda2 / std::f64::consts::SQRT_2;
    let omega1 = lambda1 + scaled;
    let omega2 = if omega1 == 0.0 { 0.0 } else { scaled / omega1 };
    (omega1, omega2)
}

/// Inverse of [`ggl_reparam`].
pub fn ggl_reparam_inv(omega1: f64, omega2: f64) -> (f64, f64) {
    let scaled = omega1 * omega2;
    let lambda1 = omega1 - scaled;
    let lambda2 = scaled * std::f64::consts::SQRT_2;
    (lambda1, lambda2)
}
