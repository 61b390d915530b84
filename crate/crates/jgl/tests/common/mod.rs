//! Shared test oracles, deliberately independent of the library's solve path.
//!
//! - Per-element prox oracles: the fused case enumerates the 2^(K-1)
//!   order-respecting fusion groupings and picks the candidate with the
//!   lowest objective; the group case finds the shrunken radius by bisection
//!   on the stationarity equation. Neither shares code with the production
//!   closed forms.
//! - A proximal-gradient (FISTA) reference solver minimizes the penalized
//!   objective directly, using the oracle proxes.
//! - A stationarity checker certifies the existence of valid subgradients at
//!   a claimed solution by solving tiny box-constrained least-squares
//!   feasibility problems.

#![allow(dead_code)]

use jgl::linalg::SymMatrix;
use jgl::prox::PenaltyKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn soft(x: f64, c: f64) -> f64 {
    if x > c {
        x - c
    } else if x < -c {
        x + c
    } else {
        0.0
    }
}

/// Per-element fused objective
/// `(rho/2)|z-a|^2 + l1 ||z||_1 + l2 sum_{k<k'} |z_k - z_k'|`
/// (`l1` already zeroed by the caller for diagonal elements).
pub fn fgl_element_objective(a: &[f64], z: &[f64], l1: f64, l2: f64, rho: f64) -> f64 {
    let k = a.len();
    let mut obj = 0.0;
    for m in 0..k {
        obj += 0.5 * rho * (z[m] - a[m]).powi(2) + l1 * z[m].abs();
    }
    for m in 0..k {
        for l in (m + 1)..k {
            obj += l2 * (z[m] - z[l]).abs();
        }
    }
    obj
}

/// Per-element group objective
/// `(rho/2)|z-a|^2 + l1 ||z||_1 + l2 ||z||_2` (off-diagonal form).
pub fn ggl_element_objective(a: &[f64], z: &[f64], l1: f64, l2: f64, rho: f64) -> f64 {
    let mut obj = 0.0;
    let mut sq = 0.0;
    for m in 0..a.len() {
        obj += 0.5 * rho * (z[m] - a[m]).powi(2) + l1 * z[m].abs();
        sq += z[m] * z[m];
    }
    obj + l2 * sq.sqrt()
}

/// Exact fused prox by enumeration. The minimizer preserves the order of
/// `a`, so its fusion groups are consecutive in sorted order; for each of the
/// 2^(K-1) consecutive groupings the reduced problem is solvable in closed
/// form per group, and evaluating the true objective picks the right one.
pub fn fgl_prox_oracle(a: &[f64], is_diagonal: bool, l1: f64, l2: f64, rho: f64) -> Vec<f64> {
    let k = a.len();
    assert!(k >= 1 && k <= 16);
    let l1 = if is_diagonal { 0.0 } else { l1 };
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| a[x].partial_cmp(&a[y]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| a[i]).collect();

    let mut best_obj = f64::INFINITY;
    let mut best: Vec<f64> = vec![0.0; k];
    for mask in 0..(1u32 << (k - 1)) {
        let mut bounds = vec![0usize];
        for b in 0..k - 1 {
            if mask & (1 << b) != 0 {
                bounds.push(b + 1);
            }
        }
        bounds.push(k);

        let mut z_sorted = vec![0.0; k];
        for g in 0..bounds.len() - 1 {
            let (s, e) = (bounds[g], bounds[g + 1]);
            let count = (e - s) as f64;
            let mean = sorted[s..e].iter().sum::<f64>() / count;
            let smaller = s as f64;
            let larger = (k - e) as f64;
            // Fixed ordering turns cross-group fusion into a linear term.
            let shift = l2 * (smaller - larger) / rho;
            let v = soft(mean - shift, l1 / rho);
            for m in s..e {
                z_sorted[m] = v;
            }
        }
        let obj = fgl_element_objective(&sorted, &z_sorted, l1, l2, rho);
        if obj < best_obj {
            best_obj = obj;
            best = z_sorted;
        }
    }

    let mut z = vec![0.0; k];
    for (m, &idx) in order.iter().enumerate() {
        z[idx] = best[m];
    }
    z
}

/// Exact group prox by bisection on the stationarity radius. Candidates are
/// the all-zero stack and the positive-radius stationary point; the true
/// objective decides.
pub fn ggl_prox_oracle(a: &[f64], is_diagonal: bool, l1: f64, l2: f64, rho: f64) -> Vec<f64> {
    if is_diagonal {
        return a.to_vec();
    }
    let k = a.len();
    let thresholded: Vec<f64> = a.iter().map(|&v| soft(v, l1 / rho)).collect();
    let s_norm = thresholded.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut candidates: Vec<Vec<f64>> = vec![vec![0.0; k]];
    if s_norm > 0.0 {
        let magnitude_at = |r: f64| -> Vec<f64> {
            thresholded
                .iter()
                .map(|&t| rho * t.abs() / (rho + l2 / r))
                .collect()
        };
        let radius = if l2 == 0.0 {
            Some(s_norm)
        } else {
            let phi = |r: f64| -> f64 {
                let m = magnitude_at(r);
                m.iter().map(|v| v * v).sum::<f64>().sqrt() - r
            };
            let mut lo = s_norm * 1e-12;
            let mut hi = s_norm;
            if phi(lo) > 0.0 && phi(hi) <= 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if phi(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Some(0.5 * (lo + hi))
            } else {
                None
            }
        };
        if let Some(r) = radius {
            let m = magnitude_at(r);
            candidates.push(
                thresholded
                    .iter()
                    .zip(m.iter())
                    .map(|(&t, &mag)| mag.copysign(t))
                    .collect(),
            );
        }
    }

    candidates
        .into_iter()
        .min_by(|x, y| {
            ggl_element_objective(a, x, l1, l2, rho)
                .partial_cmp(&ggl_element_objective(a, y, l1, l2, rho))
                .unwrap()
        })
        .unwrap()
}

/// Oracle prox applied element-wise over matrix stacks.
pub fn apply_prox_oracle(
    a: &[SymMatrix],
    kind: PenaltyKind,
    l1: f64,
    l2: f64,
    rho: f64,
) -> Vec<SymMatrix> {
    let k = a.len();
    let p = a[0].dim();
    let mut out = vec![SymMatrix::zeros(p); k];
    let mut stack = vec![0.0; k];
    for i in 0..p {
        for j in i..p {
            for (c, m) in a.iter().enumerate() {
                stack[c] = m.get(i, j);
            }
            let solved = match kind {
                PenaltyKind::Fgl => fgl_prox_oracle(&stack, i == j, l1, l2, rho),
                PenaltyKind::Ggl => ggl_prox_oracle(&stack, i == j, l1, l2, rho),
            };
            for (c, v) in solved.iter().enumerate() {
                out[c].set_sym(i, j, *v);
            }
        }
    }
    out
}

/// Penalty value computed independently over ordered index pairs: the l1
/// terms and the group term run over `i != j`, the fusion term over all
/// `(i, j)`.
pub fn penalty_oracle(theta: &[SymMatrix], kind: PenaltyKind, l1: f64, l2: f64) -> f64 {
    let k = theta.len();
    let p = theta[0].dim();
    let mut total = 0.0;
    for i in 0..p {
        for j in 0..p {
            if i != j {
                for m in theta {
                    total += l1 * m.get(i, j).abs();
                }
            }
            match kind {
                PenaltyKind::Fgl => {
                    for c1 in 0..k {
                        for c2 in (c1 + 1)..k {
                            total += l2 * (theta[c1].get(i, j) - theta[c2].get(i, j)).abs();
                        }
                    }
                }
                PenaltyKind::Ggl => {
                    if i != j {
                        let norm = theta
                            .iter()
                            .map(|m| m.get(i, j) * m.get(i, j))
                            .sum::<f64>()
                            .sqrt();
                        total += l2 * norm;
                    }
                }
            }
        }
    }
    total
}

/// Full minimization objective
/// `-sum_k w_k (log det T_k - tr(S_k T_k)) + P(T)`; None when some class is
/// not positive definite.
pub fn full_objective(
    covs: &[SymMatrix],
    weights: &[f64],
    kind: PenaltyKind,
    l1: f64,
    l2: f64,
    theta: &[SymMatrix],
) -> Option<f64> {
    let mut nll = 0.0;
    for ((s, t), &w) in covs.iter().zip(theta.iter()).zip(weights.iter()) {
        let log_det = t.log_det_pd().ok()?;
        nll -= w * (log_det - s.trace_product(t));
    }
    Some(nll + penalty_oracle(theta, kind, l1, l2))
}

fn stack_axpy(x: &[SymMatrix], y: &[SymMatrix], alpha: f64) -> Vec<SymMatrix> {
    let p = x[0].dim();
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| SymMatrix::from_fn(p, |i, j| a.get(i, j) + alpha * b.get(i, j)))
        .collect()
}

fn stack_sub(x: &[SymMatrix], y: &[SymMatrix]) -> Vec<SymMatrix> {
    stack_axpy(x, y, -1.0)
}

fn stack_dot(x: &[SymMatrix], y: &[SymMatrix]) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| {
            a.as_slice()
                .iter()
                .zip(b.as_slice().iter())
                .map(|(u, v)| u * v)
                .sum::<f64>()
        })
        .sum()
}

fn stack_max_abs_diff(x: &[SymMatrix], y: &[SymMatrix]) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| {
            a.as_slice()
                .iter()
                .zip(b.as_slice().iter())
                .map(|(u, v)| (u - v).abs())
                .fold(0.0_f64, f64::max)
        })
        .fold(0.0_f64, f64::max)
}

/// Reference solver: FISTA with backtracking and adaptive restart on the
/// penalized objective, with proxes computed by the enumeration/bisection
/// oracles. Entirely disjoint from the ADMM implementation it checks.
pub fn solve_reference(
    covs: &[SymMatrix],
    weights: &[f64],
    kind: PenaltyKind,
    l1: f64,
    l2: f64,
    max_iter: usize,
) -> Vec<SymMatrix> {
    let k = covs.len();
    let p = covs[0].dim();

    let smooth = |theta: &[SymMatrix]| -> Option<f64> {
        let mut value = 0.0;
        for ((s, t), &w) in covs.iter().zip(theta.iter()).zip(weights.iter()) {
            let log_det = t.log_det_pd().ok()?;
            value -= w * (log_det - s.trace_product(t));
        }
        Some(value)
    };
    let grad = |theta: &[SymMatrix]| -> Option<Vec<SymMatrix>> {
        let mut out = Vec::with_capacity(k);
        for ((s, t), &w) in covs.iter().zip(theta.iter()).zip(weights.iter()) {
            let inv = t.inverse_pd().ok()?;
            out.push(SymMatrix::from_fn(p, |i, j| {
                w * (s.get(i, j) - inv.get(i, j))
            }));
        }
        Some(out)
    };
    let objective = |theta: &[SymMatrix]| -> Option<f64> {
        Some(smooth(theta)? + penalty_oracle(theta, kind, l1, l2))
    };

    let mut x: Vec<SymMatrix> = vec![SymMatrix::identity(p); k];
    let mut y = x.clone();
    let mut fx = objective(&x).expect("identity start is feasible");
    let mut momentum = 1.0_f64;
    let mut step = 1.0_f64;
    let mut quiet_iters = 0;

    for _ in 0..max_iter {
        let (fy, gy) = match (smooth(&y), grad(&y)) {
            (Some(f), Some(g)) => (f, g),
            _ => {
                // Extrapolation left the cone; restart the momentum.
                y = x.clone();
                momentum = 1.0;
                let f = smooth(&y).expect("x is feasible");
                let g = grad(&y).expect("x is feasible");
                (f, g)
            }
        };

        // Backtracking line search on the smooth majorizer.
        let mut candidate;
        loop {
            let forward = stack_axpy(&y, &gy, -step);
            candidate = apply_prox_oracle(&forward, kind, l1, l2, 1.0 / step);
            if let Some(fc) = smooth(&candidate) {
                let diff = stack_sub(&candidate, &y);
                let quad = fy + stack_dot(&gy, &diff) + stack_dot(&diff, &diff) / (2.0 * step);
                if fc <= quad + 1e-12 * (1.0 + quad.abs()) {
                    break;
                }
            }
            step *= 0.5;
            assert!(step > 1e-14, "reference solver line search collapsed");
        }

        let f_candidate = objective(&candidate).expect("candidate is feasible");
        if f_candidate > fx + 1e-12 * (1.0 + fx.abs()) {
            // Objective went up: drop momentum and retry from x.
            y = x.clone();
            momentum = 1.0;
            continue;
        }

        let change = stack_max_abs_diff(&candidate, &x);
        let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let blend = (momentum - 1.0) / next_momentum;
        let diff = stack_sub(&candidate, &x);
        y = stack_axpy(&candidate, &diff, blend);
        momentum = next_momentum;
        x = candidate;
        fx = f_candidate;
        step *= 1.2;

        if change < 1e-11 {
            quiet_iters += 1;
            if quiet_iters >= 5 {
                break;
            }
        } else {
            quiet_iters = 0;
        }
    }
    x
}

/// Minimal max-abs stationarity gap for one fused element:
/// finds box-feasible subgradients with `r_k = l1 g_k + l2 sum_{l != k} d_kl`
/// as nearly as possible, honoring the signs fixed by `z`.
pub fn fgl_stationarity_gap(r: &[f64], z: &[f64], l1: f64, l2: f64, is_diagonal: bool) -> f64 {
    let k = r.len();
    // Variable layout: gammas (absent on the diagonal), then pair duals d_kl.
    #[derive(Clone)]
    struct Var {
        rows: Vec<(usize, f64)>,
        value: f64,
        fixed: bool,
    }
    let mut vars: Vec<Var> = Vec::new();
    if !is_diagonal && l1 > 0.0 {
        for m in 0..k {
            vars.push(Var {
                rows: vec![(m, l1)],
                value: if z[m] != 0.0 { z[m].signum() } else { 0.0 },
                fixed: z[m] != 0.0,
            });
        }
    }
    if l2 > 0.0 {
        for m in 0..k {
            for l in (m + 1)..k {
                let fixed = z[m] != z[l];
                vars.push(Var {
                    rows: vec![(m, l2), (l, -l2)],
                    value: if fixed { (z[m] - z[l]).signum() } else { 0.0 },
                    fixed,
                });
            }
        }
    }

    let residual = |vars: &[Var]| -> Vec<f64> {
        let mut e = r.to_vec();
        for v in vars {
            for &(row, coeff) in &v.rows {
                e[row] -= coeff * v.value;
            }
        }
        e
    };

    // Cyclic coordinate descent on the squared residual over the free box
    // variables; each 1-D update has a closed form.
    for _ in 0..2000 {
        let mut moved = 0.0_f64;
        let mut e = residual(&vars);
        for idx in 0..vars.len() {
            if vars[idx].fixed {
                continue;
            }
            let mut numer = 0.0;
            let mut denom = 0.0;
            for &(row, coeff) in &vars[idx].rows {
                numer += coeff * (e[row] + coeff * vars[idx].value);
                denom += coeff * coeff;
            }
            if denom == 0.0 {
                continue;
            }
            let new_value = (numer / denom).clamp(-1.0, 1.0);
            let delta = new_value - vars[idx].value;
            if delta != 0.0 {
                for &(row, coeff) in &vars[idx].rows {
                    e[row] -= coeff * delta;
                }
                vars[idx].value = new_value;
                moved = moved.max(delta.abs());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }

    residual(&vars)
        .into_iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Minimal max-abs stationarity gap for one group element:
/// `r_k = l1 g_k + l2 y_k` with `g` box-bounded (signs fixed off zeros) and
/// `y` the group subgradient (`z/||z||` when the group is nonzero, any unit
/// ball vector otherwise). Diagonal elements carry no penalty at all.
pub fn ggl_stationarity_gap(r: &[f64], z: &[f64], l1: f64, l2: f64, is_diagonal: bool) -> f64 {
    let k = r.len();
    if is_diagonal {
        return r.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    }
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        let mut worst = 0.0_f64;
        for m in 0..k {
            let upsilon = z[m] / norm;
            let target = r[m] - l2 * upsilon;
            let gap = if z[m] != 0.0 {
                (target - l1 * z[m].signum()).abs()
            } else if l1 > 0.0 {
                (target.abs() - l1).max(0.0)
            } else {
                target.abs()
            };
            worst = worst.max(gap);
        }
        return worst;
    }
    // Whole group at zero: alternate between the gamma box and the unit
    // ball until the squared residual stalls.
    let mut gamma = vec![0.0_f64; k];
    let mut upsilon = vec![0.0_f64; k];
    for _ in 0..500 {
        for m in 0..k {
            upsilon[m] = if l2 > 0.0 {
                (r[m] - l1 * gamma[m]) / l2
            } else {
                0.0
            };
        }
        let unorm = upsilon.iter().map(|v| v * v).sum::<f64>().sqrt();
        if unorm > 1.0 {
            for u in upsilon.iter_mut() {
                *u /= unorm;
            }
        }
        for m in 0..k {
            gamma[m] = if l1 > 0.0 {
                ((r[m] - l2 * upsilon[m]) / l1).clamp(-1.0, 1.0)
            } else {
                0.0
            };
        }
    }
    (0..k)
        .map(|m| (r[m] - l1 * gamma[m] - l2 * upsilon[m]).abs())
        .fold(0.0_f64, f64::max)
}

/// Max-abs stationarity residual of an estimate for the full problem:
/// for every element the class-k relation
/// `w_k ((Z_k^-1)_ij - S_k_ij) = l1 Gamma + l2 Upsilon`
/// must admit valid subgradients. Requires a positive definite estimate.
pub fn kkt_residual(
    covs: &[SymMatrix],
    weights: &[f64],
    kind: PenaltyKind,
    l1: f64,
    l2: f64,
    z: &[SymMatrix],
) -> f64 {
    let k = covs.len();
    let p = covs[0].dim();
    let inverses: Vec<SymMatrix> = z
        .iter()
        .map(|m| m.inverse_pd().expect("estimate must be positive definite"))
        .collect();
    let mut worst = 0.0_f64;
    let mut r = vec![0.0; k];
    let mut zs = vec![0.0; k];
    for i in 0..p {
        for j in i..p {
            for c in 0..k {
                r[c] = weights[c] * (inverses[c].get(i, j) - covs[c].get(i, j));
                zs[c] = z[c].get(i, j);
            }
            let gap = match kind {
                PenaltyKind::Fgl => fgl_stationarity_gap(&r, &zs, l1, l2, i == j),
                PenaltyKind::Ggl => ggl_stationarity_gap(&r, &zs, l1, l2, i == j),
            };
            worst = worst.max(gap);
        }
    }
    worst
}

/// Random positive definite covariance with unit-scale diagonal.
pub fn random_cov(p: usize, seed: u64) -> SymMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..p * p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SymMatrix::from_fn(p, |i, j| {
        let dot: f64 = (0..p).map(|m| a[m * p + i] * a[m * p + j]).sum();
        dot / p as f64 + if i == j { 1.0 } else { 0.0 }
    })
}

/// Covariances with pronounced within-group structure and weak cross-group
/// noise, so moderate penalties split the problem into several blocks.
pub fn clustered_covs(p: usize, k: usize, groups: usize, seed: u64) -> Vec<SymMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = p / groups;
    (0..k)
        .map(|_| {
            let mut m = SymMatrix::identity(p);
            for i in 0..p {
                for j in (i + 1)..p {
                    let same = i / size == j / size && i / size < groups;
                    let v = if same {
                        rng.gen_range(0.15..0.45) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
                    } else {
                        rng.gen_range(-0.02..0.02)
                    };
                    m.set_sym(i, j, v);
                }
            }
            let lift = m.min_eigenvalue().unwrap().min(0.0).abs() + 0.05;
            SymMatrix::from_fn(p, |i, j| m.get(i, j) + if i == j { lift } else { 0.0 })
        })
        .collect()
}

pub fn max_abs_entry_diff(a: &[SymMatrix], b: &[SymMatrix]) -> f64 {
    stack_max_abs_diff(a, b)
}
