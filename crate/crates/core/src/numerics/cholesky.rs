use super::SymmetricMatrix;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    n: usize,
    lower: Vec<f64>,
    logdet: f64,
}

/// Factors a symmetric matrix, rejecting pivots at or below `n·ε·max_diag`.
///
/// `logdet` is accumulated as `2·Σ ln L_ii` and never formed from a raw
/// determinant.
pub fn cholesky_factor(s: &SymmetricMatrix) -> Result<CholeskyFactor> {
    let n = s.dim();
    let tol = n as f64 * f64::EPSILON * s.max_diagonal().max(0.0);
    let mut lower = vec![0.0; n * n];
    let mut logdet = 0.0;
    for j in 0..n {
        let row_j = j * n;
        let mut d = s.get(j, j);
        for k in 0..j {
            d -= lower[row_j + k] * lower[row_j + k];
        }
        if !(d > tol) {
            return Err(Error::NotPositiveDefinite { row: j, pivot: d });
        }
        let ljj = d.sqrt();
        lower[row_j + j] = ljj;
        logdet += 2.0 * ljj.ln();
        for i in (j + 1)..n {
            let row_i = i * n;
            let mut v = s.get(i, j);
            for k in 0..j {
                v -= lower[row_i + k] * lower[row_j + k];
            }
            lower[row_i + j] = v / ljj;
        }
    }
    Ok(CholeskyFactor { n, lower, logdet })
}

/// Solves `S·x = b` for positive definite `S`.
pub fn spd_solve(s: &SymmetricMatrix, b: &[f64]) -> Result<Vec<f64>> {
    s.check_len(b.len())?;
    cholesky_factor(s)?.solve(b)
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `ln det S`.
    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.n + j]
    }

    /// Row-major lower factor (upper triangle is zero).
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `L⁻¹ b`.
    pub fn forward_solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b.len())?;
        let n = self.n;
        let mut x = b.to_vec();
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i];
            let acc: f64 = row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] = (x[i] - acc) / self.lower[i * n + i];
        }
        Ok(x)
    }

    /// `L⁻ᵀ b`.
    pub fn backward_solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b.len())?;
        let n = self.n;
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut acc = 0.0;
            for k in (i + 1)..n {
                acc += self.lower[k * n + i] * x[k];
            }
            x[i] = (x[i] - acc) / self.lower[i * n + i];
        }
        Ok(x)
    }

    /// `S⁻¹ b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.backward_solve(&self.forward_solve(b)?)
    }

    /// `xᵀ S⁻¹ x = ‖L⁻¹x‖²`.
    pub fn inverse_quad_form(&self, x: &[f64]) -> Result<f64> {
        Ok(self.forward_solve(x)?.iter().map(|v| v * v).sum())
    }

    /// `L z`, used to colour independent normals.
    pub fn mul_lower(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_len(z.len())?;
        let n = self.n;
        Ok((0..n)
            .map(|i| {
                self.lower[i * n..i * n + i + 1]
                    .iter()
                    .zip(z)
                    .map(|(l, v)| l * v)
                    .sum()
            })
            .collect())
    }

    /// `L·Lᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.n;
        SymmetricMatrix::from_fn(n, |i, j| {
            let m = i.min(j);
            (0..=m).map(|k| self.get(i, k) * self.get(j, k)).sum()
        })
        .expect("factor dimension is positive")
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: len });
        }
        Ok(())
    }
}
