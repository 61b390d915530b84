//! Exact proximal operators for the fused (FGL) and group (GGL) penalties.
//!
//! The penalized minimization the solver hands to this module separates over
//! matrix elements, so everything reduces to small per-element problems: for
//! each `(i,j)` we minimize, over the K class values,
//!
//! ```text
//! (rho/2) * sum_k (z_k - a_k)^2  +  l1 * 1{i != j} * sum_k |z_k|  +  fusion/group term
//! ```
//!
//! FGL fuses every pair of classes (`l2 * sum_{k<k'} |z_k - z_k'|`); GGL
//! applies a group penalty on the across-class vector (`l2 * ||z||_2`, off
//! diagonal only). Per-element penalty weight matrices rescale `l1`/`l2`
//! element-wise, which is how the partial-correlation variant is expressed.

use crate::linalg::{soft_threshold, SymMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProxError {
    #[error("penalty parameters must be nonnegative (got lambda1={lambda1}, lambda2={lambda2})")]
    NegativePenalty { lambda1: f64, lambda2: f64 },
    #[error("rho must be strictly positive (got {0})")]
    NonPositiveRho(f64),
    #[error("element stack must contain at least one class value")]
    EmptyStack,
    #[error("matrix stack dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("penalty weight matrix has a negative or non-finite entry at ({i},{j})")]
    InvalidWeight { i: usize, j: usize },
    #[error("diagonal estimate must be strictly positive at index {0}")]
    NonPositiveDiagonal(usize),
    #[error("matrix stack must contain at least one class")]
    EmptyMatrixStack,
}

/// Which coupling penalty to apply across classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    /// Fused: l1 on off-diagonals plus pairwise fusion of all entries.
    Fgl,
    /// Group: l1 on off-diagonals plus an across-class group penalty.
    Ggl,
}

impl std::fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PenaltyKind::Fgl => write!(f, "fgl"),
            PenaltyKind::Ggl => write!(f, "ggl"),
        }
    }
}

/// Penalty configuration: kind, the two tuning parameters, and optional
/// per-element weight matrices multiplying them.
#[derive(Debug, Clone)]
pub struct PenaltySpec {
    kind: PenaltyKind,
    lambda1: f64,
    lambda2: f64,
    weights1: Option<SymMatrix>,
    weights2: Option<SymMatrix>,
}

impl PenaltySpec {
    pub fn new(kind: PenaltyKind, lambda1: f64, lambda2: f64) -> Result<Self, ProxError> {
        if !(lambda1 >= 0.0) || !(lambda2 >= 0.0) {
            return Err(ProxError::NegativePenalty { lambda1, lambda2 });
        }
        Ok(Self {
            kind,
            lambda1,
            lambda2,
            weights1: None,
            weights2: None,
        })
    }

    /// Attaches per-element multipliers for `lambda1` and `lambda2`.
    /// Entries must be nonnegative; zero disables the penalty for an element.
    pub fn with_weights(
        mut self,
        weights1: Option<SymMatrix>,
        weights2: Option<SymMatrix>,
    ) -> Result<Self, ProxError> {
        for w in [&weights1, &weights2].into_iter().flatten() {
            let p = w.dim();
            for i in 0..p {
                for j in i..p {
                    let v = w.get(i, j);
                    if !(v >= 0.0) || !v.is_finite() {
                        return Err(ProxError::InvalidWeight { i, j });
                    }
                }
            }
        }
        self.weights1 = weights1;
        self.weights2 = weights2;
        Ok(self)
    }

    pub fn kind(&self) -> PenaltyKind {
        self.kind
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn has_weights(&self) -> bool {
        self.weights1.is_some() || self.weights2.is_some()
    }

    /// Effective `lambda1` multiplier at `(i,j)`.
    #[inline]
    pub fn weight1(&self, i: usize, j: usize) -> f64 {
        self.weights1.as_ref().map_or(1.0, |w| w.get(i, j))
    }

    /// Effective `lambda2` multiplier at `(i,j)`.
    #[inline]
    pub fn weight2(&self, i: usize, j: usize) -> f64 {
        self.weights2.as_ref().map_or(1.0, |w| w.get(i, j))
    }

    /// Checks the weight matrices, when present, against the problem size.
    pub fn check_dim(&self, p: usize) -> Result<(), ProxError> {
        for w in [&self.weights1, &self.weights2].into_iter().flatten() {
            if w.dim() != p {
                return Err(ProxError::DimensionMismatch {
                    expected: p,
                    got: w.dim(),
                });
            }
        }
        Ok(())
    }

    /// Same spec restricted to a feature subset (weights sliced accordingly).
    pub fn restrict(&self, indices: &[usize]) -> PenaltySpec {
        PenaltySpec {
            kind: self.kind,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            weights1: self.weights1.as_ref().map(|w| w.submatrix(indices)),
            weights2: self.weights2.as_ref().map(|w| w.submatrix(indices)),
        }
    }
}

/// The K across-class values of one matrix element.
#[derive(Debug, Clone)]
pub struct ElementStack {
    pub values: Vec<f64>,
    pub is_diagonal: bool,
}

impl ElementStack {
    pub fn new(values: Vec<f64>, is_diagonal: bool) -> Result<Self, ProxError> {
        if values.is_empty() {
            return Err(ProxError::EmptyStack);
        }
        Ok(Self {
            values,
            is_diagonal,
        })
    }
}

fn check_rho(rho: f64) -> Result<(), ProxError> {
    if rho > 0.0 {
        Ok(())
    } else {
        Err(ProxError::NonPositiveRho(rho))
    }
}

/// Closed form for the two-class fused element problem: move the pair
/// toward each other by `l2/rho` (collapsing to the average once within
/// `2*l2/rho`), then soft-threshold each value by `l1/rho` off the diagonal.
pub fn fgl_prox_pair(
    a1: f64,
    a2: f64,
    l1: f64,
    l2: f64,
    rho: f64,
    is_diagonal: bool,
) -> Result<(f64, f64), ProxError> {
    check_rho(rho)?;
    let t = l2 / rho;
    let (z1, z2) = if a1 > a2 + 2.0 * t {
        (a1 - t, a2 + t)
    } else if a2 > a1 + 2.0 * t {
        (a1 + t, a2 - t)
    } else {
        let avg = 0.5 * (a1 + a2);
        (avg, avg)
    };
    if is_diagonal {
        Ok((z1, z2))
    } else {
        let c = l1 / rho;
        Ok((soft_threshold(z1, c), soft_threshold(z2, c)))
    }
}

/// Exact general-K fused element problem.
///
/// Solves the fusion-only problem first: the minimizer preserves the input
/// order, so after sorting, the pairwise fusion term has a fixed sign pattern
/// and folds into the quadratic as a linear shift. That leaves an isotonic
/// regression, solved by pool-adjacent-violators. The l1 part commutes with
/// fusion, so each value is soft-thresholded afterwards (skipped on the
/// diagonal).
pub fn fgl_prox_stack(
    stack: &ElementStack,
    l1: f64,
    l2: f64,
    rho: f64,
) -> Result<Vec<f64>, ProxError> {
    check_rho(rho)?;
    let a = &stack.values;
    let k = a.len();
    if k == 0 {
        return Err(ProxError::EmptyStack);
    }
    let thr = if stack.is_diagonal { 0.0 } else { l1 / rho };
    if k == 1 {
        return Ok(vec![soft_threshold(a[0], thr)]);
    }
    if k == 2 {
        let (z1, z2) = fgl_prox_pair(a[0], a[1], l1, l2, rho, stack.is_diagonal)?;
        return Ok(vec![z1, z2]);
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| a[x].partial_cmp(&a[y]).unwrap_or(std::cmp::Ordering::Equal));

    // Rank m (0-based) sees m smaller and k-1-m larger partners, so the
    // fusion term contributes the linear coefficient (2m + 1 - k) once the
    // order is fixed.
    let shift = l2 / rho;
    let targets: Vec<f64> = order
        .iter()
        .enumerate()
        .map(|(m, &idx)| a[idx] - shift * (2.0 * m as f64 + 1.0 - k as f64))
        .collect();

    // Pool adjacent violators for the ascending isotonic fit.
    let mut means: Vec<f64> = Vec::with_capacity(k);
    let mut counts: Vec<usize> = Vec::with_capacity(k);
    for &t in &targets {
        means.push(t);
        counts.push(1);
        while means.len() >= 2 && means[means.len() - 2] >= means[means.len() - 1] {
            let (m2, c2) = (means.pop().unwrap(), counts.pop().unwrap());
            let last = means.len() - 1;
            let c1 = counts[last];
            means[last] = (means[last] * c1 as f64 + m2 * c2 as f64) / (c1 + c2) as f64;
            counts[last] = c1 + c2;
        }
    }

    let mut z = vec![0.0; k];
    let mut pos = 0;
    for (block_mean, block_count) in means.iter().zip(counts.iter()) {
        for _ in 0..*block_count {
            z[order[pos]] = soft_threshold(*block_mean, thr);
            pos += 1;
        }
    }
    Ok(z)
}

/// Group element problem: diagonal entries pass through; off-diagonal stacks
/// are soft-thresholded by `l1/rho` and then shrunk as a group,
/// `z_k = S(a_k, l1/rho) * (1 - (l2/rho) / ||S(a, l1/rho)||_2)_+`,
/// with the whole stack zero when the thresholded norm vanishes.
pub fn ggl_prox_stack(
    stack: &ElementStack,
    l1: f64,
    l2: f64,
    rho: f64,
) -> Result<Vec<f64>, ProxError> {
    check_rho(rho)?;
    let a = &stack.values;
    if a.is_empty() {
        return Err(ProxError::EmptyStack);
    }
    if stack.is_diagonal {
        return Ok(a.clone());
    }
    let c = l1 / rho;
    let thresholded: Vec<f64> = a.iter().map(|&v| soft_threshold(v, c)).collect();
    let norm = thresholded.iter().map(|v| v * v).sum::<f64>().sqrt();
    let g = l2 / rho;
    if norm <= g || norm == 0.0 {
        return Ok(vec![0.0; a.len()]);
    }
    let factor = 1.0 - g / norm;
    Ok(thresholded.iter().map(|v| v * factor).collect())
}

/// Applies the penalty prox element-wise across a stack of K matrices,
/// scaling `lambda1`/`lambda2` by the per-element weights when present.
pub fn apply_prox(
    a: &[SymMatrix],
    spec: &PenaltySpec,
    rho: f64,
) -> Result<Vec<SymMatrix>, ProxError> {
    check_rho(rho)?;
    let k = a.len();
    if k == 0 {
        return Err(ProxError::EmptyMatrixStack);
    }
    let p = a[0].dim();
    for m in a {
        if m.dim() != p {
            return Err(ProxError::DimensionMismatch {
                expected: p,
                got: m.dim(),
            });
        }
    }
    spec.check_dim(p)?;

    let mut out = vec![SymMatrix::zeros(p); k];
    let mut values = vec![0.0; k];
    for i in 0..p {
        for j in i..p {
            for (c, m) in a.iter().enumerate() {
                values[c] = m.get(i, j);
            }
            let l1 = spec.lambda1 * spec.weight1(i, j);
            let l2 = spec.lambda2 * spec.weight2(i, j);
            let diag = i == j;
            let solved: Vec<f64> = match spec.kind {
                PenaltyKind::Fgl => {
                    if k == 2 {
                        let (z1, z2) = fgl_prox_pair(values[0], values[1], l1, l2, rho, diag)?;
                        vec![z1, z2]
                    } else {
                        let stack = ElementStack {
                            values: values.clone(),
                            is_diagonal: diag,
                        };
                        fgl_prox_stack(&stack, l1, l2, rho)?
                    }
                }
                PenaltyKind::Ggl => {
                    let stack = ElementStack {
                        values: values.clone(),
                        is_diagonal: diag,
                    };
                    ggl_prox_stack(&stack, l1, l2, rho)?
                }
            };
            for (c, z) in solved.iter().enumerate() {
                out[c].set_sym(i, j, *z);
            }
        }
    }
    Ok(out)
}

/// Evaluates the penalty on a stack of K matrices.
///
/// Conventions: the `lambda1` terms and the GGL group term run over ordered
/// pairs `i != j` (each unordered pair counted twice); the FGL fusion term
/// runs over all ordered `(i,j)` including the diagonal (off-diagonal twice,
/// diagonal once). Per-element weights multiply in element-wise.
pub fn penalty_value(theta: &[SymMatrix], spec: &PenaltySpec) -> f64 {
    if theta.is_empty() {
        return 0.0;
    }
    let p = theta[0].dim();
    let kc = theta.len();
    let mut total = 0.0;
    for i in 0..p {
        for j in i..p {
            let w1 = spec.weight1(i, j);
            let w2 = spec.weight2(i, j);
            if i != j {
                let sum_abs: f64 = theta.iter().map(|m| m.get(i, j).abs()).sum();
                total += 2.0 * spec.lambda1 * w1 * sum_abs;
            }
            match spec.kind {
                PenaltyKind::Fgl => {
                    let mut fuse = 0.0;
                    for k1 in 0..kc {
                        for k2 in (k1 + 1)..kc {
                            fuse += (theta[k1].get(i, j) - theta[k2].get(i, j)).abs();
                        }
                    }
                    let mult = if i == j { 1.0 } else { 2.0 };
                    total += mult * spec.lambda2 * w2 * fuse;
                }
                PenaltyKind::Ggl => {
                    if i != j {
                        let norm = theta
                            .iter()
                            .map(|m| m.get(i, j) * m.get(i, j))
                            .sum::<f64>()
                            .sqrt();
                        total += 2.0 * spec.lambda2 * w2 * norm;
                    }
                }
            }
        }
    }
    total
}

/// Weight matrix for the partial-correlation extension:
/// `W(i,j) = 1 / sqrt(d_i * d_j)` from a positive diagonal estimate of the
/// shared precision diagonal.
pub fn partial_corr_weights(diag_est: &[f64]) -> Result<SymMatrix, ProxError> {
    if diag_est.is_empty() {
        return Err(ProxError::EmptyStack);
    }
    for (i, &d) in diag_est.iter().enumerate() {
        if !(d > 0.0) || !d.is_finite() {
            return Err(ProxError::NonPositiveDiagonal(i));
        }
    }
    let p = diag_est.len();
    Ok(SymMatrix::from_fn(p, |i, j| {
        1.0 / (diag_est[i] * diag_est[j]).sqrt()
    }))
}
