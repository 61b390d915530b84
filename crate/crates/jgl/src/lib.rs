//! Joint estimation of multiple sparse Gaussian graphical models.
//!
//! Given observations from K related classes, the library estimates K
//! precision matrices at once by maximizing a penalized joint log
//! likelihood. Two convex coupling penalties are provided: the fused
//! penalty (FGL), which shrinks corresponding edge values across classes
//! toward each other, and the group penalty (GGL), which encourages a
//! shared sparsity pattern. The solver is an ADMM loop whose per-class
//! update costs one symmetric eigendecomposition; covariance-based
//! screening rules split large problems into independent blocks with no
//! loss of exactness.
//!
//! Modules:
//! - [`linalg`]: dense symmetric eigendecomposition, Cholesky, covariance.
//! - [`prox`]: exact proximal operators for both penalties.
//! - [`solver`]: the ADMM loop and the penalized objective.
//! - [`screening`]: block detection and block-wise solving.
//! - [`select`]: AIC scoring and grid search over the tuning parameters.
//! - [`simgen`]: synthetic network benchmarks and evaluation metrics.
//! - [`cli`]: dataset ingestion, standardization, and file outputs.

pub mod cli;
pub mod dataset;
pub mod linalg;
pub mod prox;
pub mod screening;
pub mod select;
pub mod simgen;
pub mod solver;

pub use dataset::ClassDataset;
pub use linalg::{empirical_cov, soft_threshold, EigDecomp, SymMatrix};
pub use prox::{PenaltyKind, PenaltySpec};
pub use screening::{solve_with_screening, BlockPartition, ScreenAdjacency};
pub use solver::{admm_solve, AdmmConfig, JglEstimate, ProblemInput};
