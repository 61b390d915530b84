//! Synthetic benchmark generation and evaluation metrics.
//!
//! Networks are unions of equal-sized unconnected subnetworks, each grown by
//! preferential attachment so degrees follow a heavy-tailed distribution.
//! A covariance is built from a network in four steps: uniform edge values on
//! `[-0.4,-0.1] U [0.1,0.4]`, per-row rescaling by 1.5x the absolute
//! off-diagonal row sum, symmetrization by averaging with the transpose, and
//! a correlation-style transform of the inverse with off-diagonal damping
//! 0.6 that leaves an exact unit diagonal.
//!
//! All generators are pure functions of their spec and a seed. Replicate
//! streams are split by hashing `(seed, replicate, purpose)` with SplitMix64,
//! so any replicate can be regenerated in isolation on any machine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dataset::ClassDataset;
use crate::linalg::{empirical_cov, LinalgError, SymMatrix};
use crate::prox::{PenaltyKind, PenaltySpec};
use crate::screening::solve_with_screening;
use crate::solver::{AdmmConfig, JglEstimate, ProblemInput, SolverError};

/// Difference threshold for declaring estimated edges differential when the
/// estimator cannot produce exactly equal values across classes.
pub const DIFFERENTIAL_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("p = {p} is not divisible by n_subnets = {n_subnets}")]
    UnevenSubnets { p: usize, n_subnets: usize },
    #[error("network spec needs p >= 2, n_subnets >= 1, edges_per_node >= 1")]
    BadNetworkSpec,
    #[error("class structure invalid: {0}")]
    BadStructure(&'static str),
    #[error("branch removal kept breaking positive definiteness after {attempts} redraws")]
    RejectedSeed { attempts: usize },
    #[error("estimate for class {class} is not positive definite")]
    NonPdEstimate { class: usize },
    #[error("estimate and truth dimensions differ")]
    DimensionMismatch,
}

/// Topology parameters for one synthetic network.
#[derive(Debug, Clone)]
pub struct NetworkSpec {
    pub p: usize,
    /// Equal-sized mutually unconnected subnetworks.
    pub n_subnets: usize,
    /// Preferential-attachment edges added per new node; 1 grows trees with
    /// `p / n_subnets - 1` edges per subnetwork.
    pub edges_per_node: usize,
    pub seed: u64,
}

impl NetworkSpec {
    fn validate(&self) -> Result<(), SimError> {
        if self.p < 2 || self.n_subnets == 0 || self.edges_per_node == 0 {
            return Err(SimError::BadNetworkSpec);
        }
        if self.p % self.n_subnets != 0 {
            return Err(SimError::UnevenSubnets {
                p: self.p,
                n_subnets: self.n_subnets,
            });
        }
        Ok(())
    }

    pub fn subnet_size(&self) -> usize {
        self.p / self.n_subnets
    }
}

/// How the K classes differ from the first class's network.
#[derive(Debug, Clone)]
pub enum ClassDiff {
    /// Per class, the subnetworks whose covariance block is reset to the
    /// identity (class 0 keeps everything).
    SubnetReset(Vec<Vec<usize>>),
    /// Two classes over a single connected network; class 2 loses the
    /// largest branch hanging off one edge, removed on the precision scale.
    BranchRemoval,
}

#[derive(Debug, Clone)]
pub struct ClassStructure {
    pub classes: usize,
    pub diff: ClassDiff,
}

impl ClassStructure {
    fn validate(&self, network: &NetworkSpec) -> Result<(), SimError> {
        if self.classes == 0 {
            return Err(SimError::BadStructure("need at least one class"));
        }
        match &self.diff {
            ClassDiff::SubnetReset(removed) => {
                if removed.len() != self.classes {
                    return Err(SimError::BadStructure(
                        "need one removal list per class",
                    ));
                }
                if !removed[0].is_empty() {
                    return Err(SimError::BadStructure(
                        "class 1 must keep every subnetwork",
                    ));
                }
                for list in removed {
                    for &s in list {
                        if s >= network.n_subnets {
                            return Err(SimError::BadStructure("subnet index out of range"));
                        }
                    }
                }
                Ok(())
            }
            ClassDiff::BranchRemoval => {
                if self.classes != 2 {
                    return Err(SimError::BadStructure("branch removal is two-class"));
                }
                if network.n_subnets != 1 || network.edges_per_node != 1 {
                    return Err(SimError::BadStructure(
                        "branch removal needs a single tree network",
                    ));
                }
                Ok(())
            }
        }
    }
}

/// The generating model: covariances, their inverses, per-class network
/// edges, and which element pairs truly differ between classes.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub sigmas: Vec<SymMatrix>,
    pub precisions: Vec<SymMatrix>,
    /// Per class, sorted `i < j` network edge list.
    pub edges: Vec<Vec<(usize, usize)>>,
    /// `(k, k', i, j)` with `k < k'`, `i < j`: true precision values differ.
    pub differential_pairs: Vec<(usize, usize, usize, usize)>,
}

impl GroundTruth {
    pub fn dim(&self) -> usize {
        self.sigmas[0].dim()
    }

    pub fn n_classes(&self) -> usize {
        self.sigmas.len()
    }

    pub fn has_edge(&self, class: usize, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges[class].binary_search(&(a, b)).is_ok()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Stable per-replicate stream splitting.
pub fn derive_seed(base: u64, replicate: u64, purpose: u64) -> u64 {
    splitmix64(base ^ splitmix64(replicate.wrapping_mul(16).wrapping_add(purpose)))
}

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grows the subnetworks by preferential attachment and returns the union
/// edge list, sorted with `i < j`. No edge crosses a subnetwork boundary.
pub fn gen_powerlaw_network(spec: &NetworkSpec) -> Result<Vec<(usize, usize)>, SimError> {
    spec.validate()?;
    let size = spec.subnet_size();
    let mut rng = rng_from(spec.seed);
    let mut edges = Vec::new();
    for subnet in 0..spec.n_subnets {
        let offset = subnet * size;
        // Attachment pool: one entry per unit of degree, plus the seed node,
        // so sampling the pool is degree-proportional sampling.
        let mut pool: Vec<usize> = vec![0];
        for node in 1..size {
            let m = spec.edges_per_node.min(node);
            let mut targets: Vec<usize> = Vec::with_capacity(m);
            while targets.len() < m {
                let pick = pool[rng.gen_range(0..pool.len())];
                if !targets.contains(&pick) {
                    targets.push(pick);
                }
            }
            for &t in &targets {
                let (a, b) = if t < node { (t, node) } else { (node, t) };
                edges.push((offset + a, offset + b));
                pool.push(node);
                pool.push(t);
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// Builds a covariance matrix from a network: uniform edge weights, row
/// rescaling for diagonal dominance, symmetrization, then the damped
/// correlation transform of the inverse. Output has an exact unit diagonal
/// and is positive definite.
pub fn gen_sigma(edges: &[(usize, usize)], p: usize, seed: u64) -> Result<SymMatrix, SimError> {
    let mut rng = rng_from(seed);
    let mut a = SymMatrix::identity(p);
    for &(i, j) in edges {
        let magnitude = rng.gen_range(0.1..0.4);
        let value = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
        a.set_sym(i, j, value);
    }

    // Scale each off-diagonal element by 1.5x the absolute off-diagonal sum
    // of its row. An element belongs to two rows once the matrix is
    // symmetrized, so the larger row sum is the binding one; dividing by it
    // caps every final off-diagonal row sum at 2/3, which keeps the averaged
    // matrix strictly diagonally dominant (hub rows would break dominance if
    // each side were scaled by its own row only).
    let row_sums: Vec<f64> = (0..p)
        .map(|i| {
            (0..p)
                .filter(|&j| j != i)
                .map(|j| a.get(i, j).abs())
                .sum()
        })
        .collect();
    let mut scaled = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            let denom = 1.5 * row_sums[i].max(row_sums[j]);
            scaled[i * p + j] = if i == j {
                1.0
            } else if denom > 0.0 {
                a.get(i, j) / denom
            } else {
                0.0
            };
        }
    }
    let sym = SymMatrix::from_fn(p, |i, j| 0.5 * (scaled[i * p + j] + scaled[j * p + i]));

    let inv = sym.inverse_pd()?;
    Ok(SymMatrix::from_fn(p, |i, j| {
        if i == j {
            1.0
        } else {
            0.6 * inv.get(i, j) / (inv.get(i, i) * inv.get(j, j)).sqrt()
        }
    }))
}

/// Subtree node sets of a tree rooted at 0, from an `i < j` edge list.
fn hanging_subtrees(p: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize, Vec<usize>)> {
    let mut adj = vec![Vec::new(); p];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    // Parent links by BFS from the root.
    let mut parent = vec![usize::MAX; p];
    let mut order = Vec::with_capacity(p);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut seen = vec![false; p];
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    // Collect each node's subtree in reverse BFS order.
    let mut subtree: Vec<Vec<usize>> = (0..p).map(|v| vec![v]).collect();
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            let members = subtree[v].clone();
            subtree[parent[v]].extend(members);
        }
    }
    order
        .into_iter()
        .filter(|&v| v != 0)
        .map(|v| (parent[v], v, subtree[v].clone()))
        .collect()
}

/// Generates the full ground truth: the class-1 covariance from the network,
/// then the per-class edits.
///
/// Subnet resets happen on the covariance (the block becomes the identity,
/// and because blocks are exactly decoupled its precision block is the
/// identity too — asserted numerically). Branch removal edits the precision
/// of class 1 directly and re-inverts; a draw whose edited precision loses
/// positive definiteness is rejected and redrawn with a shifted value seed.
pub fn gen_class_sigmas(
    network: &NetworkSpec,
    structure: &ClassStructure,
    seed: u64,
) -> Result<GroundTruth, SimError> {
    network.validate()?;
    structure.validate(network)?;
    let p = network.p;
    let edges = gen_powerlaw_network(network)?;

    match &structure.diff {
        ClassDiff::SubnetReset(removed) => {
            let sigma1 = gen_sigma(&edges, p, seed)?;
            let size = network.subnet_size();
            let mut sigmas = Vec::with_capacity(structure.classes);
            let mut edge_lists = Vec::with_capacity(structure.classes);
            for class_removed in removed {
                let mut sigma = sigma1.clone();
                for &subnet in class_removed {
                    let lo = subnet * size;
                    let hi = lo + size;
                    for i in lo..hi {
                        for j in i..hi {
                            sigma.set_sym(i, j, if i == j { 1.0 } else { 0.0 });
                        }
                    }
                }
                let class_edges: Vec<(usize, usize)> = edges
                    .iter()
                    .copied()
                    .filter(|&(i, _)| !class_removed.contains(&(i / size)))
                    .collect();
                sigmas.push(sigma);
                edge_lists.push(class_edges);
            }
            let precisions: Vec<SymMatrix> = sigmas
                .iter()
                .map(|s| s.inverse_pd())
                .collect::<Result<_, _>>()?;
            // Reset blocks must invert to identity blocks.
            for (k, class_removed) in removed.iter().enumerate() {
                for &subnet in class_removed {
                    let lo = subnet * size;
                    for i in lo..lo + size {
                        for j in lo..lo + size {
                            let target = if i == j { 1.0 } else { 0.0 };
                            debug_assert!(
                                (precisions[k].get(i, j) - target).abs() < 1e-8,
                                "decoupled block should invert to the identity"
                            );
                        }
                    }
                }
            }
            let differential_pairs = differential_from_precisions(&precisions);
            Ok(GroundTruth {
                sigmas,
                precisions,
                edges: edge_lists,
                differential_pairs,
            })
        }
        ClassDiff::BranchRemoval => {
            const MAX_ATTEMPTS: usize = 100;
            let subtrees = hanging_subtrees(p, &edges);
            // Largest branch; ties resolved by the smaller branch root.
            let (cut_parent, branch_root, members) = subtrees
                .into_iter()
                .max_by(|a, b| a.2.len().cmp(&b.2.len()).then(b.1.cmp(&a.1)))
                .expect("tree has at least one edge");
            let mut in_branch = vec![false; p];
            for &v in &members {
                in_branch[v] = true;
            }
            let removed: Vec<(usize, usize)> = edges
                .iter()
                .copied()
                .filter(|&(i, j)| {
                    (in_branch[i] && in_branch[j])
                        || (i, j) == ordered(cut_parent, branch_root)
                })
                .collect();

            for attempt in 0..MAX_ATTEMPTS {
                let value_seed = derive_seed(seed, attempt as u64, 15);
                let sigma1 = gen_sigma(&edges, p, value_seed)?;
                let prec1 = sigma1.inverse_pd()?;
                let mut prec2 = prec1.clone();
                for &(i, j) in &removed {
                    prec2.set_sym(i, j, 0.0);
                }
                if prec2.cholesky().is_err() {
                    continue;
                }
                let sigma2 = prec2.inverse_pd()?;
                let class2_edges: Vec<(usize, usize)> = edges
                    .iter()
                    .copied()
                    .filter(|e| !removed.contains(e))
                    .collect();
                let precisions = vec![prec1, prec2];
                let differential_pairs = differential_from_precisions(&precisions);
                return Ok(GroundTruth {
                    sigmas: vec![sigma1, sigma2],
                    precisions,
                    edges: vec![edges, class2_edges],
                    differential_pairs,
                });
            }
            Err(SimError::RejectedSeed {
                attempts: MAX_ATTEMPTS,
            })
        }
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn differential_from_precisions(precisions: &[SymMatrix]) -> Vec<(usize, usize, usize, usize)> {
    const TOL: f64 = 1e-8;
    let p = precisions[0].dim();
    let kc = precisions.len();
    let mut pairs = Vec::new();
    for k1 in 0..kc {
        for k2 in (k1 + 1)..kc {
            for i in 0..p {
                for j in (i + 1)..p {
                    if (precisions[k1].get(i, j) - precisions[k2].get(i, j)).abs() > TOL {
                        pairs.push((k1, k2, i, j));
                    }
                }
            }
        }
    }
    pairs
}

/// Draws `n` i.i.d. rows from `N(0, sigma)` through the Cholesky factor.
/// The same seed always reproduces the same matrix.
pub fn sample_mvn(sigma: &SymMatrix, n: usize, seed: u64) -> Result<ClassDataset, SimError> {
    let p = sigma.dim();
    let chol = sigma.cholesky()?;
    let mut rng = rng_from(seed);
    let mut data = Vec::with_capacity(n * p);
    let mut g = vec![0.0; p];
    for _ in 0..n {
        for gi in g.iter_mut() {
            *gi = rng.sample(StandardNormal);
        }
        data.extend_from_slice(&chol.mul_vec(&g));
    }
    let names = (0..p).map(|i| format!("v{}", i + 1)).collect();
    Ok(ClassDataset::from_flat(names, data, n).expect("generated data is rectangular"))
}

/// Edge recovery counts and the squared error of edge values.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMetrics {
    /// True positives per class, over unordered off-diagonal pairs.
    pub tp: Vec<usize>,
    /// False positives per class.
    pub fp: Vec<usize>,
    /// `sum_k sum_{i != j} (est - truth)^2` over ordered pairs, i.e. twice
    /// the unordered sum.
    pub sse: f64,
}

pub fn edge_metrics(truth: &GroundTruth, est: &JglEstimate) -> Result<EdgeMetrics, SimError> {
    let p = truth.dim();
    if est.dim() != p || est.n_classes() != truth.n_classes() {
        return Err(SimError::DimensionMismatch);
    }
    let mut tp = vec![0usize; truth.n_classes()];
    let mut fp = vec![0usize; truth.n_classes()];
    let mut sse = 0.0;
    for k in 0..truth.n_classes() {
        for i in 0..p {
            for j in (i + 1)..p {
                let estimated = est.is_edge(k, i, j);
                let actual = truth.has_edge(k, i, j);
                if estimated && actual {
                    tp[k] += 1;
                } else if estimated && !actual {
                    fp[k] += 1;
                }
                let diff = est.precision[k].get(i, j) - truth.precisions[k].get(i, j);
                sse += 2.0 * diff * diff;
            }
        }
    }
    Ok(EdgeMetrics { tp, fp, sse })
}

/// Which rule declares a pair of class estimates different.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferentialRule {
    /// Exact inequality; appropriate for estimators that can fuse values.
    Exact,
    /// `|difference| > 1e-2`; for estimators that never match exactly.
    Threshold,
}

impl DifferentialRule {
    pub fn for_penalty(kind: PenaltyKind) -> Self {
        match kind {
            PenaltyKind::Fgl => DifferentialRule::Exact,
            PenaltyKind::Ggl => DifferentialRule::Threshold,
        }
    }

    fn differs(self, a: f64, b: f64) -> bool {
        match self {
            DifferentialRule::Exact => a != b,
            DifferentialRule::Threshold => (a - b).abs() > DIFFERENTIAL_THRESHOLD,
        }
    }
}

/// Differential-edge recovery over pairs `k < k'`, `i < j`.
pub fn differential_edge_metrics(
    truth: &GroundTruth,
    est: &JglEstimate,
    rule: DifferentialRule,
) -> Result<(usize, usize), SimError> {
    let p = truth.dim();
    if est.dim() != p || est.n_classes() != truth.n_classes() {
        return Err(SimError::DimensionMismatch);
    }
    let truth_set: std::collections::BTreeSet<&(usize, usize, usize, usize)> =
        truth.differential_pairs.iter().collect();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for k1 in 0..truth.n_classes() {
        for k2 in (k1 + 1)..truth.n_classes() {
            for i in 0..p {
                for j in (i + 1)..p {
                    let a = est.precision[k1].get(i, j);
                    let b = est.precision[k2].get(i, j);
                    if rule.differs(a, b) {
                        if truth_set.contains(&(k1, k2, i, j)) {
                            tp += 1;
                        } else {
                            fp += 1;
                        }
                    }
                }
            }
        }
    }
    Ok((tp, fp))
}

/// Kullback-Leibler divergence (up to the additive constant `-K p / 2`) of
/// the estimated Gaussians from the truth:
/// `(1/2) sum_k ( -log det(T_k Sigma_k) + trace(T_k Sigma_k) )`.
/// Equals `K p / 2` exactly when every estimate matches the true precision.
pub fn kl_divergence(truth: &GroundTruth, est: &JglEstimate) -> Result<f64, SimError> {
    if est.dim() != truth.dim() || est.n_classes() != truth.n_classes() {
        return Err(SimError::DimensionMismatch);
    }
    let mut total = 0.0;
    for k in 0..truth.n_classes() {
        let theta = &est.precision[k];
        let log_det_theta = theta
            .log_det_pd()
            .map_err(|_| SimError::NonPdEstimate { class: k })?;
        let log_det_sigma = truth.sigmas[k].log_det_pd()?;
        let trace = theta.trace_product(&truth.sigmas[k]);
        total += 0.5 * (-(log_det_theta + log_det_sigma) + trace);
    }
    Ok(total)
}

/// Full benchmark protocol configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub network: NetworkSpec,
    pub structure: ClassStructure,
    pub n_per_class: usize,
    pub replicates: usize,
    pub penalty: PenaltyKind,
    /// Reported tuning values; scaled by the class sample size before
    /// solving when `scale_by_sample_size` is set.
    pub lambda1_values: Vec<f64>,
    pub lambda2_values: Vec<f64>,
    pub scale_by_sample_size: bool,
    pub admm: AdmmConfig,
    pub seed: u64,
}

/// One metrics row per `(replicate, lambda cell)`.
#[derive(Debug, Clone)]
pub struct MetricsRow {
    pub replicate: usize,
    pub penalty: PenaltyKind,
    pub lambda1: f64,
    pub lambda2: f64,
    pub tp_edges: usize,
    pub fp_edges: usize,
    pub sse: f64,
    pub tp_diff: usize,
    pub fp_diff: usize,
    pub dkl: f64,
    pub iterations: usize,
    pub converged: bool,
    pub blocks: usize,
}

/// Runs the replicate x grid protocol: generate truth, sample and center
/// data, solve every cell with screening, and score all metrics.
///
/// Seed streams per replicate `r`: purpose 0 is the topology, 1 the
/// covariance values, and `2 + k` the class-`k` samples.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<MetricsRow>, SimError> {
    let rule = DifferentialRule::for_penalty(config.penalty);
    let rows: Vec<Vec<MetricsRow>> = (0..config.replicates)
        .into_par_iter()
        .map(|rep| run_replicate(config, rep, rule))
        .collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn run_replicate(
    config: &ExperimentConfig,
    rep: usize,
    rule: DifferentialRule,
) -> Result<Vec<MetricsRow>, SimError> {
    let mut network = config.network.clone();
    network.seed = derive_seed(config.seed, rep as u64, 0);
    let sigma_seed = derive_seed(config.seed, rep as u64, 1);
    let truth = gen_class_sigmas(&network, &config.structure, sigma_seed)?;

    let n = config.n_per_class;
    let covs: Vec<SymMatrix> = (0..truth.n_classes())
        .map(|k| {
            let seed = derive_seed(config.seed, rep as u64, 2 + k as u64);
            let data = sample_mvn(&truth.sigmas[k], n, seed)?;
            let centered = crate::cli::standardize(&data, crate::cli::StandardizeMode::Center)
                .expect("centering cannot fail");
            Ok::<_, SimError>(empirical_cov(&centered)?)
        })
        .collect::<Result<_, _>>()?;

    let weights = vec![n as f64; truth.n_classes()];
    let scale = if config.scale_by_sample_size {
        n as f64
    } else {
        1.0
    };

    let mut rows = Vec::new();
    for &l1 in &config.lambda1_values {
        for &l2 in &config.lambda2_values {
            let spec = PenaltySpec::new(config.penalty, l1 * scale, l2 * scale)
                .map_err(SolverError::from)?;
            let input = ProblemInput::new(covs.clone(), weights.clone(), spec)?;
            let est = solve_with_screening(&input, &config.admm)?;
            let em = edge_metrics(&truth, &est)?;
            let (tp_diff, fp_diff) = differential_edge_metrics(&truth, &est, rule)?;
            let dkl = kl_divergence(&truth, &est).unwrap_or(f64::INFINITY);
            rows.push(MetricsRow {
                replicate: rep,
                penalty: config.penalty,
                lambda1: l1,
                lambda2: l2,
                tp_edges: em.tp.iter().sum(),
                fp_edges: em.fp.iter().sum(),
                sse: em.sse,
                tp_diff,
                fp_diff,
                dkl,
                iterations: est.iterations,
                converged: est.converged,
                blocks: est.blocks,
            });
        }
    }
    Ok(rows)
}
