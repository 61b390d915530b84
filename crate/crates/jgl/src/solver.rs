//! ADMM solver for the joint penalized-likelihood problem.
//!
//! The problem splits as `Theta = Z`: per-class updates of `Theta` have a
//! closed form through one symmetric eigendecomposition, the `Z` update is
//! the penalty prox, and `U` accumulates the scaled dual. The returned
//! estimate is the final `Z` stack, whose entries carry the exact zeros the
//! prox produces; the `Theta` iterates never become exactly sparse.

use rayon::prelude::*;

use crate::linalg::{LinalgError, SymMatrix};
use crate::prox::{apply_prox, penalty_value, PenaltySpec, ProxError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error("problem must contain at least one class")]
    EmptyProblem,
    #[error("covariance {index} has dimension {got}, expected {expected}")]
    CovDimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("expected {expected} class weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("class weight {index} must be strictly positive and finite (got {value})")]
    BadWeight { index: usize, value: f64 },
    #[error("config: {0} must be strictly positive")]
    BadConfig(&'static str),
    #[error("non-finite values encountered at iteration {iter}; the solve diverged")]
    Diverged { iter: usize },
    #[error("precision estimate for class {class} is not positive definite")]
    NotPositiveDefinite { class: usize },
}

/// The K empirical covariances, their class weights, and the penalty.
///
/// Weights generalize the per-class sample sizes: pass `n_k` for the
/// likelihood-weighted problem or all ones to weight classes equally.
#[derive(Debug, Clone)]
pub struct ProblemInput {
    pub covs: Vec<SymMatrix>,
    pub weights: Vec<f64>,
    pub spec: PenaltySpec,
}

impl ProblemInput {
    pub fn new(
        covs: Vec<SymMatrix>,
        weights: Vec<f64>,
        spec: PenaltySpec,
    ) -> Result<Self, SolverError> {
        let input = Self {
            covs,
            weights,
            spec,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn n_classes(&self) -> usize {
        self.covs.len()
    }

    pub fn dim(&self) -> usize {
        self.covs.first().map_or(0, |c| c.dim())
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.covs.is_empty() {
            return Err(SolverError::EmptyProblem);
        }
        let p = self.covs[0].dim();
        for (index, c) in self.covs.iter().enumerate() {
            if c.dim() != p {
                return Err(SolverError::CovDimensionMismatch {
                    index,
                    expected: p,
                    got: c.dim(),
                });
            }
        }
        if self.weights.len() != self.covs.len() {
            return Err(SolverError::WeightCountMismatch {
                expected: self.covs.len(),
                got: self.weights.len(),
            });
        }
        for (index, &w) in self.weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(SolverError::BadWeight { index, value: w });
            }
        }
        self.spec.check_dim(p)?;
        Ok(())
    }

    /// Problem restricted to a feature subset, weights carried over.
    pub fn restrict(&self, indices: &[usize]) -> ProblemInput {
        ProblemInput {
            covs: self.covs.iter().map(|c| c.submatrix(indices)).collect(),
            weights: self.weights.clone(),
            spec: self.spec.restrict(indices),
        }
    }
}

/// ADMM iteration controls.
#[derive(Debug, Clone)]
pub struct AdmmConfig {
    /// Augmented-Lagrangian parameter; any positive value converges.
    pub rho: f64,
    pub max_iter: usize,
    /// Convergence tolerance. The primal criterion
    /// `max_k ||Theta_k - Z_k||_F / (1 + ||Z_k||_F)` and the dual criterion
    /// `max_k ||Z_k - Z_k_prev||_F / (1 + ||Z_k||_F)` must both stay below
    /// this on two consecutive iterations. Without the dual check a zero
    /// penalty would stop at the first iterate, since the prox is then the
    /// identity and the primal residual vanishes immediately.
    pub tol: f64,
    /// Record the penalized objective at each iteration (adds a `log det`
    /// per class per iteration).
    pub track_objective: bool,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            max_iter: 500,
            tol: 1e-5,
            track_objective: false,
        }
    }
}

impl AdmmConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if !(self.rho > 0.0) {
            return Err(SolverError::BadConfig("rho"));
        }
        if !(self.tol > 0.0) {
            return Err(SolverError::BadConfig("tol"));
        }
        if self.max_iter == 0 {
            return Err(SolverError::BadConfig("max_iter"));
        }
        Ok(())
    }
}

/// Solver output: per-class precision estimates (the `Z` copies), their
/// exact-zero support pattern, and iteration diagnostics.
#[derive(Debug, Clone)]
pub struct JglEstimate {
    pub precision: Vec<SymMatrix>,
    /// `support[k][i*p + j]` is true iff `precision[k](i,j)` is nonzero.
    pub support: Vec<Vec<bool>>,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub objective_trace: Option<Vec<f64>>,
    /// Number of screening blocks behind this estimate (1 for a plain solve).
    pub blocks: usize,
}

impl JglEstimate {
    pub fn n_classes(&self) -> usize {
        self.precision.len()
    }

    pub fn dim(&self) -> usize {
        self.precision.first().map_or(0, |m| m.dim())
    }

    pub fn is_edge(&self, class: usize, i: usize, j: usize) -> bool {
        self.support[class][i * self.dim() + j]
    }

    /// Number of nonzero off-diagonal unordered pairs in class `k`.
    pub fn edge_count(&self, class: usize) -> usize {
        let p = self.dim();
        let mut count = 0;
        for i in 0..p {
            for j in (i + 1)..p {
                if self.support[class][i * p + j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Nonzero entries of the full symmetric matrix, diagonal included.
    pub fn nonzero_count(&self, class: usize) -> usize {
        self.support[class].iter().filter(|&&b| b).count()
    }

    fn from_z(z: Vec<SymMatrix>, iterations: usize, converged: bool, primal: f64) -> Self {
        let support = z
            .iter()
            .map(|m| m.as_slice().iter().map(|&v| v != 0.0).collect())
            .collect();
        JglEstimate {
            precision: z,
            support,
            iterations,
            converged,
            primal_residual: primal,
            objective_trace: None,
            blocks: 1,
        }
    }
}

/// One per-class update: minimizes
/// `-w (log det T - trace(S T)) + (rho/2) ||T - Z + U||_F^2`.
///
/// With `V D V^T` the eigendecomposition of `S - rho Z / w + rho U / w`, the
/// minimizer is `V D~ V^T` where
/// `D~_jj = (w / (2 rho)) * (-D_jj + sqrt(D_jj^2 + 4 rho / w))`.
/// Every `D~_jj` is strictly positive, so the update keeps the iterate
/// positive definite.
pub fn theta_update(
    s: &SymMatrix,
    z: &SymMatrix,
    u: &SymMatrix,
    w: f64,
    rho: f64,
) -> Result<SymMatrix, SolverError> {
    if !(w > 0.0) {
        return Err(SolverError::BadWeight { index: 0, value: w });
    }
    if !(rho > 0.0) {
        return Err(SolverError::BadConfig("rho"));
    }
    let p = s.dim();
    let scale = rho / w;
    let b = SymMatrix::from_fn(p, |i, j| s.get(i, j) - scale * z.get(i, j) + scale * u.get(i, j));
    let eig = b.eig_sym()?;
    let gain = w / (2.0 * rho);
    let lift = 4.0 * rho / w;
    let new_diag: Vec<f64> = eig
        .values
        .iter()
        .map(|&d| gain * (-d + (d * d + lift).sqrt()))
        .collect();
    let v = &eig.vectors;
    // Scale columns by the new diagonal once, then form the symmetric product.
    let mut scaled = vec![0.0; p * p];
    for r in 0..p {
        for c in 0..p {
            scaled[r * p + c] = v[r * p + c] * new_diag[c];
        }
    }
    Ok(SymMatrix::from_fn(p, |i, j| {
        (0..p).map(|m| scaled[i * p + m] * v[j * p + m]).sum()
    }))
}

/// Penalized objective in minimization form:
/// `-sum_k w_k (log det T_k - trace(S_k T_k)) + P({T})`.
///
/// ADMM is not a descent method, so this is for reporting, not for stopping.
pub fn objective(input: &ProblemInput, theta: &[SymMatrix]) -> Result<f64, SolverError> {
    let mut nll = 0.0;
    for (k, t) in theta.iter().enumerate() {
        let log_det = t
            .log_det_pd()
            .map_err(|_| SolverError::NotPositiveDefinite { class: k })?;
        nll -= input.weights[k] * (log_det - input.covs[k].trace_product(t));
    }
    Ok(nll + penalty_value(theta, &input.spec))
}

/// Runs ADMM from the standard cold start (`Theta = I`, `Z = U = 0`) until
/// the primal criterion holds on two consecutive iterations or `max_iter`.
pub fn admm_solve(input: &ProblemInput, cfg: &AdmmConfig) -> Result<JglEstimate, SolverError> {
    input.validate()?;
    cfg.validate()?;
    let k = input.n_classes();
    let p = input.dim();
    let rho = cfg.rho;

    let mut theta: Vec<SymMatrix> = vec![SymMatrix::identity(p); k];
    let mut z: Vec<SymMatrix> = vec![SymMatrix::zeros(p); k];
    let mut u: Vec<SymMatrix> = vec![SymMatrix::zeros(p); k];
    let mut trace: Option<Vec<f64>> = cfg.track_objective.then(Vec::new);

    let mut streak = false;
    let mut converged = false;
    let mut primal = f64::INFINITY;
    let mut iterations = 0;

    for iter in 1..=cfg.max_iter {
        iterations = iter;

        // Per-class Theta updates are independent; parallelize when the
        // eigendecompositions are big enough to pay for it.
        if p >= 64 && k > 1 {
            theta = input
                .covs
                .par_iter()
                .zip(z.par_iter().zip(u.par_iter()))
                .zip(input.weights.par_iter())
                .map(|((s, (zk, uk)), &w)| theta_update(s, zk, uk, w, rho))
                .collect::<Result<Vec<_>, _>>()?;
        } else {
            for c in 0..k {
                theta[c] = theta_update(&input.covs[c], &z[c], &u[c], input.weights[c], rho)?;
            }
        }

        let a: Vec<SymMatrix> = (0..k)
            .map(|c| {
                SymMatrix::from_fn(p, |i, j| theta[c].get(i, j) + u[c].get(i, j))
            })
            .collect();
        let z_prev = std::mem::replace(&mut z, apply_prox(&a, &input.spec, rho)?);
        for c in 0..k {
            u[c] = SymMatrix::from_fn(p, |i, j| {
                u[c].get(i, j) + theta[c].get(i, j) - z[c].get(i, j)
            });
        }

        if !theta.iter().all(SymMatrix::is_finite)
            || !z.iter().all(SymMatrix::is_finite)
            || !u.iter().all(SymMatrix::is_finite)
        {
            return Err(SolverError::Diverged { iter });
        }

        if let Some(t) = trace.as_mut() {
            t.push(objective(input, &theta)?);
        }

        primal = 0.0;
        let mut dual = 0.0_f64;
        for c in 0..k {
            let z_norm = 1.0 + z[c].frobenius_norm();
            let gap = SymMatrix::from_fn(p, |i, j| theta[c].get(i, j) - z[c].get(i, j));
            primal = primal.max(gap.frobenius_norm() / z_norm);
            let step = SymMatrix::from_fn(p, |i, j| z[c].get(i, j) - z_prev[c].get(i, j));
            dual = dual.max(step.frobenius_norm() / z_norm);
        }

        if primal <= cfg.tol && dual <= cfg.tol {
            if streak {
                converged = true;
                break;
            }
            streak = true;
        } else {
            streak = false;
        }
    }

    let mut est = JglEstimate::from_z(z, iterations, converged, primal);
    est.objective_trace = trace;
    Ok(est)
}
