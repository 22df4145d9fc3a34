use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Dense symmetric `n×n` matrix stored row-major.
///
/// Construction always symmetrizes, so `get(i, j) == get(j, i)` holds bit for
/// bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from `f(i, j)`, averaging `f(i, j)` and `f(j, i)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("matrix dimension must be at least 1"));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = f(i, i);
            for j in 0..i {
                let (a, b) = (f(i, j), f(j, i));
                let v = if a == b { a } else { 0.5 * (a + b) };
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        Self::from_fn(n, |i, j| entries[i * n + j])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Sum of all entries, `1ᵀ S 1`.
    pub fn total_sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Returns `a·self + b·I`.
    pub fn scale_add_identity(&self, a: f64, b: f64) -> Self {
        let n = self.n;
        let mut data: Vec<f64> = self.data.iter().map(|v| a * v).collect();
        for i in 0..n {
            data[i * n + i] += b;
        }
        Self { n, data }
    }

    /// Frobenius norm of `self − other`.
    pub fn frobenius_distance(&self, other: &SymmetricMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: len });
        }
        Ok(())
    }
}
