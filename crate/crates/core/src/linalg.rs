//! Dense symmetric matrices, stored column-major.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from a closure over the lower triangle and mirrors it.
    pub fn from_lower(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            for i in j..n {
                let v = f(i, j);
                m.data[j * n + i] = v;
                m.data[i * n + j] = v;
            }
        }
        m
    }

    /// Column-major data of a square matrix. Fails when the matrix is not
    /// symmetric to within `1e-12` of its largest entry.
    pub fn from_col_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::domain(format!("expected {} entries, got {}", n * n, data.len())));
        }
        let scale = data.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1.0);
        for j in 0..n {
            for i in j + 1..n {
                if (data[j * n + i] - data[i * n + j]).abs() > 1e-12 * scale {
                    return Err(Error::domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    /// Row lists such as `[[0, 1], [1, 0]]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix is not square"));
        }
        let mut data = vec![0.0; n * n];
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                data[j * n + i] = *v;
            }
        }
        Self::from_col_major(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n + i]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.n + i] = v;
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, b| a.max(b.abs()))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for j in 0..n {
            let xj = x[j];
            for (yi, a) in y.iter_mut().zip(&self.data[j * n..(j + 1) * n]) {
                *yi += a * xj;
            }
        }
        y
    }

    /// The principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_lower(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }
}
