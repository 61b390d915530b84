//! Per-class observation matrices with feature names.

/// Errors from dataset construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("dataset must have at least one feature")]
    NoFeatures,
    #[error("row {row} has {got} values, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
}

/// One class's observation matrix: `n` rows of `p` named features.
///
/// The solver expects columns to be centered (and optionally scaled); see
/// [`crate::cli::standardize`]. Construction does not center.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDataset {
    names: Vec<String>,
    data: Vec<f64>, // n x p, row-major
    n: usize,
    p: usize,
}

impl ClassDataset {
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, DatasetError> {
        let p = names.len();
        if p == 0 {
            return Err(DatasetError::NoFeatures);
        }
        let n = rows.len();
        let mut data = Vec::with_capacity(n * p);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(DatasetError::RaggedRow {
                    row: r,
                    expected: p,
                    got: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DatasetError::NonFinite { row: r, col: c });
                }
                data.push(v);
            }
        }
        Ok(Self { names, data, n, p })
    }

    /// Builds from a flat row-major buffer; used by the generators.
    pub fn from_flat(names: Vec<String>, data: Vec<f64>, n: usize) -> Result<Self, DatasetError> {
        let p = names.len();
        if p == 0 {
            return Err(DatasetError::NoFeatures);
        }
        if data.len() != n * p {
            return Err(DatasetError::RaggedRow {
                row: n,
                expected: n * p,
                got: data.len(),
            });
        }
        Ok(Self { names, data, n, p })
    }

    #[inline]
    pub fn n_obs(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn n_features(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.p + col]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.p..(r + 1) * self.p]
    }

    /// Applies `f` column-wise, producing a transformed copy.
    pub(crate) fn map_columns(&self, f: impl Fn(usize, f64) -> f64) -> ClassDataset {
        let mut data = self.data.clone();
        for r in 0..self.n {
            for c in 0..self.p {
                data[r * self.p + c] = f(c, self.data[r * self.p + c]);
            }
        }
        ClassDataset {
            names: self.names.clone(),
            data,
            n: self.n,
            p: self.p,
        }
    }

    pub fn column_mean(&self, col: usize) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (0..self.n).map(|r| self.value(r, col)).sum::<f64>() / self.n as f64
    }
}
