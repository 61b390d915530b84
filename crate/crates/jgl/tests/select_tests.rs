//! Model-selection behavior: AIC structure and its link to estimation error.

mod common;

use jgl::linalg::{empirical_cov, SymMatrix};
use jgl::prox::{PenaltyKind, PenaltySpec};
use jgl::screening::solve_with_screening;
use jgl::select::{aic, grid_search, GridSpec, SearchMode};
use jgl::simgen::{
    derive_seed, gen_class_sigmas, kl_divergence, sample_mvn, ClassDiff, ClassStructure,
    NetworkSpec,
};
use jgl::solver::{AdmmConfig, JglEstimate, ProblemInput};

fn estimate_from(precision: Vec<SymMatrix>) -> JglEstimate {
    let support = precision
        .iter()
        .map(|m| m.as_slice().iter().map(|&v| v != 0.0).collect())
        .collect();
    JglEstimate {
        precision,
        support,
        iterations: 0,
        converged: true,
        primal_residual: 0.0,
        objective_trace: None,
        blocks: 1,
    }
}

#[test]
fn aic_decomposes_over_blocks() {
    // Block-diagonal covariances and estimates: trace, log det, and the
    // nonzero count all split, so AIC must equal the sum of per-block AICs.
    let p = 6;
    let block = |i: usize, j: usize| (i < 3) == (j < 3);
    let cov = SymMatrix::from_fn(p, |i, j| {
        if i == j {
            1.0
        } else if block(i, j) {
            0.3
        } else {
            0.0
        }
    });
    let est_mat = SymMatrix::from_fn(p, |i, j| {
        if i == j {
            1.4
        } else if block(i, j) {
            -0.2
        } else {
            0.0
        }
    });
    let n = 33usize;
    let whole = aic(&[cov.clone()], &[n], &estimate_from(vec![est_mat.clone()])).unwrap();
    let idx_a = [0usize, 1, 2];
    let idx_b = [3usize, 4, 5];
    let mut parts = 0.0;
    for idx in [&idx_a[..], &idx_b[..]] {
        let sub_cov = cov.submatrix(idx);
        let sub_est = est_mat.submatrix(idx);
        parts += aic(&[sub_cov], &[n], &estimate_from(vec![sub_est])).unwrap();
    }
    assert!(
        (whole - parts).abs() <= 1e-8,
        "AIC not block additive: {whole} vs {parts}"
    );
}

#[test]
fn aic_selected_cell_tracks_kl_divergence() {
    // On three-class synthetic data the AIC-chosen cell should beat the
    // median grid cell in divergence from the truth most of the time.
    let network = NetworkSpec {
        p: 30,
        n_subnets: 3,
        edges_per_node: 1,
        seed: 0,
    };
    let structure = ClassStructure {
        classes: 3,
        diff: ClassDiff::SubnetReset(vec![vec![], vec![2], vec![1, 2]]),
    };
    let lambda1_grid = [0.02, 0.08, 0.2, 0.45];
    let lambda2_grid = [0.0, 0.08];
    let n = 120usize;
    let cfg = AdmmConfig {
        tol: 1e-5,
        max_iter: 500,
        ..AdmmConfig::default()
    };

    let replicates = 20;
    let mut wins = 0;
    for rep in 0..replicates {
        let mut net = network.clone();
        net.seed = derive_seed(555, rep, 0);
        let truth = gen_class_sigmas(&net, &structure, derive_seed(555, rep, 1)).unwrap();
        let covs: Vec<SymMatrix> = (0..3)
            .map(|k| {
                let data =
                    sample_mvn(&truth.sigmas[k], n, derive_seed(555, rep, 2 + k as u64)).unwrap();
                let centered =
                    jgl::cli::standardize(&data, jgl::cli::StandardizeMode::Center).unwrap();
                empirical_cov(&centered).unwrap()
            })
            .collect();
        let input = ProblemInput::new(
            covs.clone(),
            vec![1.0; 3],
            PenaltySpec::new(PenaltyKind::Fgl, 0.0, 0.0).unwrap(),
        )
        .unwrap();
        let grid = GridSpec::new(
            lambda1_grid.to_vec(),
            lambda2_grid.to_vec(),
            SearchMode::FullGrid,
        )
        .unwrap();
        let report = grid_search(&input, &[n, n, n], &grid, &cfg).unwrap();

        // dKL for every converged cell, re-solving at its lambdas.
        let mut dkls = Vec::new();
        let mut best_dkl = None;
        for (idx, cell) in report.cells.iter().enumerate() {
            if !cell.converged {
                continue;
            }
            let spec = PenaltySpec::new(PenaltyKind::Fgl, cell.lambda1, cell.lambda2).unwrap();
            let cell_input = ProblemInput::new(covs.clone(), vec![1.0; 3], spec).unwrap();
            let est = solve_with_screening(&cell_input, &cfg).unwrap();
            if let Ok(d) = kl_divergence(&truth, &est) {
                dkls.push(d);
                if idx == report.best {
                    best_dkl = Some(d);
                }
            }
        }
        let best_dkl = best_dkl.expect("best cell must be scoreable");
        dkls.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = dkls[dkls.len() / 2];
        if best_dkl <= median {
            wins += 1;
        }
    }
    assert!(
        wins * 100 >= replicates * 60,
        "AIC beat the median dKL on only {wins}/{replicates} replicates"
    );
}
