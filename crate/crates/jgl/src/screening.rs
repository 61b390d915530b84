//! Covariance-only screening: detect block-diagonal structure in the exact
//! solution before solving, then solve each block independently.
//!
//! A pair `(i,j)` can be certified disconnected from the covariances alone.
//! For the fused penalty with two classes the certificate is exact in both
//! directions; with more than two classes only a sufficient condition is
//! available, so the partition may be coarser than optimal but block-wise
//! solving still returns the exact solution. The group-penalty certificate is
//! exact for every K.

use rayon::prelude::*;

use crate::linalg::SymMatrix;
use crate::prox::PenaltyKind;
use crate::solver::{admm_solve, AdmmConfig, JglEstimate, ProblemInput, SolverError};

/// Pairwise screening graph: `edges(i,j)` is true when the pair could not be
/// certified disconnected. The diagonal is always true.
#[derive(Debug, Clone)]
pub struct ScreenAdjacency {
    dim: usize,
    edges: Vec<bool>,
}

impl ScreenAdjacency {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.edges[i * self.dim + j]
    }
}

/// Feature groups from screening, ordered by smallest member.
#[derive(Debug, Clone)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Global feature index of `local` within `block`.
    pub fn global_index(&self, block: usize, local: usize) -> usize {
        self.blocks[block][local]
    }

    /// The K sub-covariances for one block.
    pub fn block_covs(&self, covs: &[SymMatrix], block: usize) -> Vec<SymMatrix> {
        covs.iter()
            .map(|c| c.submatrix(&self.blocks[block]))
            .collect()
    }
}

/// Two-class fused-penalty certificate (exact): the pair is disconnected in
/// every estimate iff
/// `|w1 s1| <= l1 + l2`, `|w2 s2| <= l1 + l2`, and `|w1 s1 + w2 s2| <= 2 l1`.
pub fn fgl_pair_disconnected(
    s1: f64,
    s2: f64,
    w1: f64,
    w2: f64,
    l1: f64,
    l2: f64,
) -> bool {
    let a = w1 * s1;
    let b = w2 * s2;
    a.abs() <= l1 + l2 && b.abs() <= l1 + l2 && (a + b).abs() <= 2.0 * l1
}

/// Fused-penalty certificate for any K (sufficient only):
/// `|w_k s_k| <= l1` for every class. A false result certifies nothing.
pub fn fgl_multi_disconnected(s: &[f64], w: &[f64], l1: f64) -> bool {
    s.iter().zip(w.iter()).all(|(&sk, &wk)| (wk * sk).abs() <= l1)
}

/// Group-penalty certificate (exact for every K):
/// `sum_k (|w_k s_k| - l1)_+^2 <= l2^2`.
pub fn ggl_pair_disconnected(s: &[f64], w: &[f64], l1: f64, l2: f64) -> bool {
    let total: f64 = s
        .iter()
        .zip(w.iter())
        .map(|(&sk, &wk)| {
            let excess = (wk * sk).abs() - l1;
            if excess > 0.0 {
                excess * excess
            } else {
                0.0
            }
        })
        .sum();
    total <= l2 * l2
}

/// Builds the screening graph by testing every pair with the certificate
/// matching the penalty. Per-element penalty weights scale the thresholds
/// element-wise.
pub fn build_adjacency(
    covs: &[SymMatrix],
    weights: &[f64],
    spec: &crate::prox::PenaltySpec,
) -> ScreenAdjacency {
    let p = covs[0].dim();
    let k = covs.len();
    let mut edges = vec![false; p * p];
    for i in 0..p {
        edges[i * p + i] = true;
    }
    let mut s = vec![0.0; k];
    for i in 0..p {
        for j in (i + 1)..p {
            for (c, cov) in covs.iter().enumerate() {
                s[c] = cov.get(i, j);
            }
            let l1 = spec.lambda1() * spec.weight1(i, j);
            let l2 = spec.lambda2() * spec.weight2(i, j);
            let disconnected = match spec.kind() {
                PenaltyKind::Fgl => {
                    if k == 2 {
                        fgl_pair_disconnected(s[0], s[1], weights[0], weights[1], l1, l2)
                    } else {
                        fgl_multi_disconnected(&s, weights, l1)
                    }
                }
                PenaltyKind::Ggl => ggl_pair_disconnected(&s, weights, l1, l2),
            };
            edges[i * p + j] = !disconnected;
            edges[j * p + i] = !disconnected;
        }
    }
    ScreenAdjacency { dim: p, edges }
}

/// Connected components of the screening graph by breadth-first traversal,
/// blocks ordered by smallest member.
pub fn connected_components(adj: &ScreenAdjacency) -> BlockPartition {
    let p = adj.dim;
    let mut assigned = vec![false; p];
    let mut blocks = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..p {
        if assigned[start] {
            continue;
        }
        let mut members = Vec::new();
        assigned[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for w in 0..p {
                if !assigned[w] && adj.connected(v, w) {
                    assigned[w] = true;
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members);
    }
    BlockPartition { blocks }
}

/// Screens, partitions, solves each block independently, and reassembles.
///
/// The reassembled estimate equals the unscreened solve: cross-block entries
/// are exactly zero in both. Singleton blocks still run a 1x1 ADMM because
/// the fused penalty couples the diagonal entries across classes.
pub fn solve_with_screening(
    input: &ProblemInput,
    cfg: &AdmmConfig,
) -> Result<JglEstimate, SolverError> {
    input.validate()?;
    let partition = connected_components(&build_adjacency(
        &input.covs,
        &input.weights,
        &input.spec,
    ));
    solve_partitioned(input, cfg, &partition)
}

/// Block-wise solve against a caller-supplied partition.
pub fn solve_partitioned(
    input: &ProblemInput,
    cfg: &AdmmConfig,
    partition: &BlockPartition,
) -> Result<JglEstimate, SolverError> {
    let k = input.n_classes();
    let p = input.dim();

    if partition.n_blocks() == 1 && partition.blocks()[0].len() == p {
        let mut est = admm_solve(input, cfg)?;
        est.blocks = 1;
        return Ok(est);
    }

    let solved: Vec<(usize, JglEstimate)> = partition
        .blocks()
        .par_iter()
        .enumerate()
        .map(|(b, block)| {
            let sub = input.restrict(block);
            admm_solve(&sub, cfg).map(|est| (b, est))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut z: Vec<SymMatrix> = vec![SymMatrix::zeros(p); k];
    let mut iterations = 0;
    let mut converged = true;
    let mut primal = 0.0_f64;
    for (b, est) in &solved {
        let block = &partition.blocks()[*b];
        for c in 0..k {
            for (li, &gi) in block.iter().enumerate() {
                for (lj, &gj) in block.iter().enumerate().skip(li) {
                    z[c].set_sym(gi, gj, est.precision[c].get(li, lj));
                }
            }
        }
        iterations = iterations.max(est.iterations);
        converged &= est.converged;
        primal = primal.max(est.primal_residual);
    }

    let support = z
        .iter()
        .map(|m| m.as_slice().iter().map(|&v| v != 0.0).collect())
        .collect();
    Ok(JglEstimate {
        precision: z,
        support,
        iterations,
        converged,
        primal_residual: primal,
        objective_trace: None,
        blocks: partition.n_blocks(),
    })
}
