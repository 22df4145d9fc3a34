//! Fractional Brownian motion increments on the uniform grid of `[0, 1]`.

use crate::error::{Error, Result};
use crate::market::ModelParams;
use crate::numerics::{cholesky_factor, CholeskyFactor, SeededStream, SymmetricMatrix};
use rayon::prelude::*;

/// Fork labels for the independent normal streams used by the samplers.
pub(crate) const FBM_STREAM: u64 = 1;
pub(crate) const BM_STREAM: u64 = 2;
pub(crate) const DRIFT_STREAM: u64 = 3;

/// Covariance `C_n` of the `n` grid increments of `Z^H` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmCovariance {
    pub hurst: f64,
    pub n: usize,
    pub matrix: SymmetricMatrix,
}

/// Autocovariance of unit-spaced fractional Gaussian noise at lag `k`.
fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let two_h = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) + (k - 1.0).abs().powf(two_h) - 2.0 * k.powf(two_h))
}

/// Builds `C_n` from the stationary-increment closed form
/// `½(|k+1|^{2H} + |k−1|^{2H} − 2|k|^{2H})·n^{−2H}`, with `k = |i − j|`.
pub fn fbm_increment_covariance(hurst: f64, n: usize) -> Result<FbmCovariance> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::domain(format!("hurst must lie in (0, 1), got {hurst}")));
    }
    if n < 1 {
        return Err(Error::domain("grid size n must be at least 1"));
    }
    let scale = (n as f64).powf(-2.0 * hurst);
    let lags: Vec<f64> = (0..n).map(|k| fgn_autocovariance(hurst, k) * scale).collect();
    let matrix = SymmetricMatrix::from_fn(n, |i, j| lags[i.abs_diff(j)])?;
    Ok(FbmCovariance { hurst, n, matrix })
}

impl FbmCovariance {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Cholesky factor of `C_n` and the ridge that was needed (zero when the
    /// plain factorisation succeeds).
    ///
    /// For `H` close to one the matrix is numerically borderline; a single
    /// retry adds `1e-12·tr(C_n)/n` to the diagonal.
    pub fn factor(&self) -> Result<(CholeskyFactor, f64)> {
        match cholesky_factor(&self.matrix) {
            Ok(f) => Ok((f, 0.0)),
            Err(Error::NotPositiveDefinite { .. }) => {
                let ridge = 1e-12 * self.trace() / self.n as f64;
                let f = cholesky_factor(&self.matrix.scale_add_identity(1.0, ridge))?;
                Ok((f, ridge))
            }
            Err(e) => Err(e),
        }
    }
}

/// `count` sampled vectors of dimension `n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSample {
    pub n: usize,
    pub count: usize,
    pub data: Vec<f64>,
    /// Diagonal ridge added to the fBm covariance before factorising.
    pub ridge: f64,
}

impl IncrementSample {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    /// Per-coordinate sample means.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n];
        for row in self.rows() {
            for (a, b) in m.iter_mut().zip(row) {
                *a += b;
            }
        }
        m.iter_mut().for_each(|a| *a /= self.count as f64);
        m
    }

    /// Unbiased sample covariance, row-major `n×n`.
    pub fn covariance(&self) -> Vec<f64> {
        let n = self.n;
        let mean = self.mean();
        let mut c = vec![0.0; n * n];
        for row in self.rows() {
            for i in 0..n {
                let di = row[i] - mean[i];
                for j in 0..=i {
                    c[i * n + j] += di * (row[j] - mean[j]);
                }
            }
        }
        let denom = (self.count - 1) as f64;
        for i in 0..n {
            for j in 0..=i {
                c[i * n + j] /= denom;
                c[j * n + i] = c[i * n + j];
            }
        }
        c
    }

    /// Fills `count` rows in parallel; row `r` is a pure function of `r`.
    pub(crate) fn generate(
        n: usize,
        count: usize,
        ridge: f64,
        fill: impl Fn(usize, &mut [f64]) + Sync,
    ) -> Self {
        let mut data = vec![0.0; n * count];
        data.par_chunks_mut(n).enumerate().for_each(|(r, row)| fill(r, row));
        Self { n, count, data, ridge }
    }
}

/// Draws `Y_n = α·L·z + n^{−1/2}·w` with `L·Lᵀ = C_n`, i.e. the law with
/// covariance `Σ₀ = I/n + α²C_n`. `z` and `w` come from disjoint forks of
/// `stream`.
pub fn sample_mixed_increments(
    params: &ModelParams,
    n: usize,
    count: usize,
    stream: &SeededStream,
) -> Result<IncrementSample> {
    let cov = fbm_increment_covariance(params.hurst, n)?;
    let (factor, ridge) = cov.factor()?;
    let fbm = stream.fork(FBM_STREAM);
    let bm = stream.fork(BM_STREAM);
    let alpha = params.alpha;
    let bm_scale = (n as f64).sqrt().recip();
    Ok(IncrementSample::generate(n, count, ridge, |r, row| {
        let start = (r * n) as u64;
        let z = fbm.normals(start, n);
        let coloured = factor.mul_lower(&z).expect("dimension fixed by construction");
        for (i, y) in row.iter_mut().enumerate() {
            *y = alpha * coloured[i] + bm_scale * bm.normal(start + i as u64);
        }
    }))
}

/// Draws increments of a Brownian motion with drift `−μα/σ`: independent
/// coordinates `N(−μα/(σn), 1/n)`.
pub fn sample_drifted_bm_increments(
    params: &ModelParams,
    n: usize,
    count: usize,
    stream: &SeededStream,
) -> Result<IncrementSample> {
    if !(params.sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be positive, got {}", params.sigma)));
    }
    if n < 1 {
        return Err(Error::domain("grid size n must be at least 1"));
    }
    let drift = -params.mu * params.alpha / (params.sigma * n as f64);
    let scale = (n as f64).sqrt().recip();
    let bm = stream.fork(DRIFT_STREAM);
    Ok(IncrementSample::generate(n, count, 0.0, |r, row| {
        let start = (r * n) as u64;
        for (i, y) in row.iter_mut().enumerate() {
            *y = drift + scale * bm.normal(start + i as u64);
        }
    }))
}
