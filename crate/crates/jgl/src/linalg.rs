//! Dense symmetric linear algebra: eigendecomposition, Cholesky factorization,
//! empirical covariance, norms, and scalar soft-thresholding.
//!
//! Matrices are stored dense and row-major. Everything here is a pure function
//! on immutable inputs and safe to call from multiple threads.

use crate::dataset::ClassDataset;

/// Errors from the dense linear algebra kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix data length {got} does not match {dim}x{dim}")]
    BadShape { dim: usize, got: usize },
    #[error("matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("eigendecomposition failed to converge for a {dim}x{dim} matrix")]
    EigNoConvergence { dim: usize },
    #[error("matrix is not positive definite: leading minor of order {order} is not positive")]
    NotPositiveDefinite { order: usize },
    #[error("class has no observations")]
    EmptyClass,
}

/// Dense symmetric `p x p` matrix with full row-major storage.
///
/// Symmetry is an invariant: constructors reject asymmetric input and all
/// mutators write both `(i,j)` and `(j,i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds from row-major data, requiring exact symmetry.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(LinalgError::BadShape {
                dim,
                got: data.len(),
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                if !(a == b) {
                    return Err(LinalgError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds from row-major data, averaging `(i,j)` and `(j,i)`.
    pub fn symmetrized(dim: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(LinalgError::BadShape {
                dim,
                got: data.len(),
            });
        }
        let mut m = Self { dim, data };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = 0.5 * (m.data[i * dim + j] + m.data[j * dim + i]);
                m.data[i * dim + j] = avg;
                m.data[j * dim + i] = avg;
            }
        }
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    /// Fills the upper triangle (including diagonal) from `f(i, j)` with
    /// `i <= j` and mirrors it.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Writes `v` to both `(i,j)` and `(j,i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Extracts the principal submatrix on `indices` (in the given order).
    pub fn submatrix(&self, indices: &[usize]) -> SymMatrix {
        let q = indices.len();
        assert!(q >= 1);
        SymMatrix::from_fn(q, |a, b| self.get(indices[a], indices[b]))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `sum_ij A_ij B_ij`, which equals `trace(A B)` for symmetric `A`, `B`.
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Symmetric eigendecomposition by Householder tridiagonalization
    /// followed by implicit-shift QL. Eigenvalues come back nondecreasing
    /// with matching eigenvector columns.
    pub fn eig_sym(&self) -> Result<EigDecomp, LinalgError> {
        let n = self.dim;
        let mut z = self.data.clone();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tred2(n, &mut z, &mut d, &mut e);
        tql2(n, &mut d, &mut e, &mut z).map_err(|_| LinalgError::EigNoConvergence { dim: n })?;

        // Sort eigenpairs ascending, permuting vector columns to match.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
        let values: Vec<f64> = order.iter().map(|&m| d[m]).collect();
        let mut vectors = vec![0.0; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                vectors[r * n + new_col] = z[r * n + old_col];
            }
        }
        Ok(EigDecomp {
            dim: n,
            values,
            vectors,
        })
    }

    /// Cholesky factorization `A = L L^T` for positive definite input.
    pub fn cholesky(&self) -> Result<CholeskyFactor, LinalgError> {
        let n = self.dim;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = self.get(j, j);
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if !(diag > 0.0) {
                return Err(LinalgError::NotPositiveDefinite { order: j + 1 });
            }
            let root = diag.sqrt();
            l[j * n + j] = root;
            for i in (j + 1)..n {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = sum / root;
            }
        }
        Ok(CholeskyFactor { dim: n, lower: l })
    }

    /// Inverse of a positive definite matrix via its Cholesky factor.
    pub fn inverse_pd(&self) -> Result<SymMatrix, LinalgError> {
        let chol = self.cholesky()?;
        Ok(chol.inverse())
    }

    /// `log det` of a positive definite matrix.
    pub fn log_det_pd(&self) -> Result<f64, LinalgError> {
        let chol = self.cholesky()?;
        Ok(chol.log_det())
    }

    /// Smallest eigenvalue; handy for definiteness checks in tests.
    pub fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.eig_sym()?.values[0])
    }
}

/// Result of [`SymMatrix::eig_sym`]: `A = V diag(values) V^T` with
/// orthonormal columns in `vectors`.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    dim: usize,
    /// Eigenvalues in nondecreasing order.
    pub values: Vec<f64>,
    /// Row-major `p x p`; column `j` is the eigenvector for `values[j]`.
    pub vectors: Vec<f64>,
}

impl EigDecomp {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rebuilds `V diag(values) V^T`; used by reconstruction checks.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        SymMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|m| self.vectors[i * n + m] * self.values[m] * self.vectors[j * n + m])
                .sum()
        })
    }

    /// Max absolute deviation of `V^T V` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n)
                    .map(|r| self.vectors[r * n + a] * self.vectors[r * n + b])
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Lower-triangular Cholesky factor of a positive definite matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }

    /// `L g` for a length-p vector; the multivariate normal sampling step.
    pub fn mul_vec(&self, g: &[f64]) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(g.len(), n);
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += self.lower[i * n + j] * g[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Solves `L L^T x = b` by forward then back substitution.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b[i];
            for j in 0..i {
                acc -= self.lower[i * n + j] * y[j];
            }
            y[i] = acc / self.lower[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= self.lower[j * n + i] * x[j];
            }
            x[i] = acc / self.lower[i * n + i];
        }
        x
    }

    /// Inverse of the factored matrix, returned symmetric.
    pub fn inverse(&self) -> SymMatrix {
        let n = self.dim;
        let mut cols = vec![0.0; n * n];
        let mut unit = vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            let x = self.solve(&unit);
            unit[j] = 0.0;
            for i in 0..n {
                cols[i * n + j] = x[i];
            }
        }
        // Mirror the upper triangle to wipe round-off asymmetry.
        SymMatrix::from_fn(n, |i, j| 0.5 * (cols[i * n + j] + cols[j * n + i]))
    }

    pub fn log_det(&self) -> f64 {
        let n = self.dim;
        2.0 * (0..n).map(|i| self.lower[i * n + i].ln()).sum::<f64>()
    }

    /// Reconstructs `L L^T`; used by factorization checks.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        SymMatrix::from_fn(n, |i, j| {
            (0..=i.min(j))
                .map(|k| self.lower[i * n + k] * self.lower[j * n + k])
                .sum()
        })
    }
}

/// Soft-thresholding: `sgn(x) * max(|x| - c, 0)`.
#[inline]
pub fn soft_threshold(x: f64, c: f64) -> f64 {
    debug_assert!(c >= 0.0, "soft_threshold requires a nonnegative threshold");
    if x > c {
        x - c
    } else if x < -c {
        x + c
    } else {
        0.0
    }
}

/// Empirical covariance `S = Y^T Y / n` of a centered dataset.
///
/// Centering is the caller's responsibility; no re-centering happens here.
pub fn empirical_cov(data: &ClassDataset) -> Result<SymMatrix, LinalgError> {
    let n = data.n_obs();
    let p = data.n_features();
    if n == 0 {
        return Err(LinalgError::EmptyClass);
    }
    let scale = 1.0 / n as f64;
    let mut s = SymMatrix::zeros(p);
    for i in 0..p {
        for j in i..p {
            let mut acc = 0.0;
            for r in 0..n {
                acc += data.value(r, i) * data.value(r, j);
            }
            s.set_sym(i, j, acc * scale);
        }
    }
    Ok(s)
}

fn hypot(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Householder reduction to symmetric tridiagonal form, accumulating the
/// orthogonal transformation in `z` (in place over the input matrix).
fn tred2(n: usize, z: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += z[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..=l {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[j * n + k] * z[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let fj = z[i * n + j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        z[j * n + k] -= fj * e[k] + gj * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i * n + k] * z[k * n + j];
                }
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
}

/// QL with implicit shifts on a symmetric tridiagonal matrix, updating the
/// eigenvector accumulator `z`. Errors when an eigenvalue needs more than the
/// iteration budget.
fn tql2(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<(), ()> {
    const MAX_SWEEPS: usize = 50;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Locate a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(());
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
