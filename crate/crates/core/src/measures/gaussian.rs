use crate::error::{Error, Result};
use crate::fbm::IncrementSample;
use crate::numerics::{cholesky_factor, CholeskyFactor, SeededStream, SymmetricMatrix};
use std::f64::consts::TAU;

/// `N(mean, cov)` with a cached Cholesky factor of `cov`.
#[derive(Debug, Clone)]
pub struct GaussianMeasure {
    mean: Vec<f64>,
    cov: SymmetricMatrix,
    factor: CholeskyFactor,
}

impl PartialEq for GaussianMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.mean == other.mean && self.cov == other.cov
    }
}

impl GaussianMeasure {
    pub fn new(mean: Vec<f64>, cov: SymmetricMatrix) -> Result<Self> {
        cov.check_len(mean.len())?;
        let factor = cholesky_factor(&cov)?;
        Ok(Self { mean, cov, factor })
    }

    pub fn centered(cov: SymmetricMatrix) -> Result<Self> {
        Self::new(vec![0.0; cov.dim()], cov)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &SymmetricMatrix {
        &self.cov
    }

    pub fn factor(&self) -> &CholeskyFactor {
        &self.factor
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other });
        }
        Ok(())
    }

    /// `(y − m)ᵀ Σ⁻¹ (y − m)`.
    pub fn mahalanobis_sq(&self, y: &[f64]) -> Result<f64> {
        self.check_dim(y.len())?;
        let centred: Vec<f64> = y.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        self.factor.inverse_quad_form(&centred)
    }

    pub fn log_density(&self, y: &[f64]) -> Result<f64> {
        let q = self.mahalanobis_sq(y)?;
        Ok(-0.5 * (q + self.factor.logdet() + self.dim() as f64 * TAU.ln()))
    }

    /// `count` draws `m + L·z`; row `r` uses normals `r·n .. (r+1)·n` of
    /// `stream`.
    pub fn sample(&self, count: usize, stream: &SeededStream) -> IncrementSample {
        let n = self.dim();
        IncrementSample::generate(n, count, 0.0, |r, row| {
            let z = stream.normals((r * n) as u64, n);
            let lz = self.factor.mul_lower(&z).expect("dimension fixed by construction");
            for ((y, m), v) in row.iter_mut().zip(&self.mean).zip(lz) {
                *y = m + v;
            }
        })
    }
}
