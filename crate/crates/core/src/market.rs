//! Grid laws of the mixed fractional Black-Scholes market.
//!
//! Under the objective measure the grid increments `Y_n` are `N(0, Σ₀)` with
//! `Σ₀ = I/n + α²C_n`. The martingale side is represented by
//! `N(−(μα/(σn))·1, Σ₁)` with `Σ₁ = (I + a_n·11ᵀ)/n`, `a_n = μ²α²/(σ²n)`.
//! The relative entropy is evaluated through the spectrum `λᵢ` of `C_n`:
//!
//! ```text
//! H = ½[Σᵢ(nα²λᵢ − ln(1 + nα²λᵢ)) − μ²α⁴/(μ²α² + σ²) + ln((μ²α² + σ²)/σ²)]
//! ```

use crate::error::{Error, Result};
use crate::fbm::{fbm_increment_covariance, FbmCovariance};
use crate::measures::{gaussian_kl, loglr_moments, GaussianMeasure};
use crate::numerics::{symmetric_eigenvalues, SymmetricMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Market parameters without the scaling factor `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    pub hurst: f64,
    pub mu: f64,
    pub sigma: f64,
}

/// One `α`-mixed fractional Black-Scholes market.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub hurst: f64,
    pub alpha: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl MarketParams {
    pub fn new(hurst: f64, mu: f64, sigma: f64) -> Result<Self> {
        if !(hurst > 0.75 && hurst < 1.0) {
            return Err(Error::domain(format!("hurst must lie in (0.75, 1), got {hurst}")));
        }
        if !mu.is_finite() {
            return Err(Error::domain(format!("mu must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { hurst, mu, sigma })
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<ModelParams> {
        ModelParams::new(self.hurst, alpha, self.mu, self.sigma)
    }
}

impl ModelParams {
    pub fn new(hurst: f64, alpha: f64, mu: f64, sigma: f64) -> Result<Self> {
        MarketParams::new(hurst, mu, sigma)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self { hurst, alpha, mu, sigma })
    }

    pub fn market(&self) -> MarketParams {
        MarketParams { hurst: self.hurst, mu: self.mu, sigma: self.sigma }
    }

    /// `a_n = μ²α²/(σ²n)`.
    pub fn a_n(&self, n: usize) -> f64 {
        (self.mu * self.alpha / self.sigma).powi(2) / n as f64
    }

    /// `μ²α²/σ²`, the drift energy that enters the entropy corrections.
    fn drift_energy(&self) -> f64 {
        (self.mu * self.alpha / self.sigma).powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelMatrices {
    pub n: usize,
    pub sigma0: SymmetricMatrix,
    pub sigma1: SymmetricMatrix,
    pub a_n: f64,
    pub fbm: FbmCovariance,
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("grid size n must be at least 1"));
    }
    Ok(())
}

pub fn build_model_matrices(params: &ModelParams, n: usize) -> Result<ModelMatrices> {
    check_n(n)?;
    let fbm = fbm_increment_covariance(params.hurst, n)?;
    let inv_n = 1.0 / n as f64;
    let alpha_sq = params.alpha * params.alpha;
    let sigma0 = SymmetricMatrix::from_fn(n, |i, j| {
        let c = alpha_sq * fbm.matrix.get(i, j);
        if i == j { c + inv_n } else { c }
    })?;
    let a_n = params.a_n(n);
    let off = a_n * inv_n;
    let sigma1 = SymmetricMatrix::from_fn(n, |i, j| if i == j { inv_n + off } else { off })?;
    Ok(ModelMatrices { n, sigma0, sigma1, a_n, fbm })
}

/// `Q^{α,n} = N(0, Σ₀)`.
pub fn mixed_measure(params: &ModelParams, n: usize) -> Result<GaussianMeasure> {
    GaussianMeasure::centered(build_model_matrices(params, n)?.sigma0)
}

/// `N(−(μα/(σn))·1, Σ₁)`.
pub fn drift_measure(params: &ModelParams, n: usize) -> Result<GaussianMeasure> {
    let m = build_model_matrices(params, n)?;
    let shift = -params.mu * params.alpha / (params.sigma * n as f64);
    GaussianMeasure::new(vec![shift; n], m.sigma1)
}

/// Wiener measure on the grid, `N(0, I/n)`.
pub fn wiener_measure(n: usize) -> Result<GaussianMeasure> {
    check_n(n)?;
    let inv_n = 1.0 / n as f64;
    GaussianMeasure::centered(SymmetricMatrix::from_fn(n, |i, j| if i == j { inv_n } else { 0.0 })?)
}

/// Spectral data of `Σ₁` from its rank-one structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigma1ClosedForm {
    /// Ascending: `1/n` repeated `n − 1` times, then `1/n + a_n`.
    pub eigenvalues: Vec<f64>,
    /// `ln(n·a_n + 1) − n·ln n`.
    pub logdet: f64,
    /// `n(I − a_n/(n·a_n + 1)·11ᵀ)`.
    pub inverse: SymmetricMatrix,
}

pub fn sigma1_closed_form(params: &ModelParams, n: usize) -> Result<Sigma1ClosedForm> {
    check_n(n)?;
    Ok(sigma1_from_a_n(params.a_n(n), n))
}

/// Closed form for `Σ₁ = (I + a·11ᵀ)/n` with an arbitrary `a ≥ 0`.
pub fn sigma1_from_a_n(a_n: f64, n: usize) -> Sigma1ClosedForm {
    let nf = n as f64;
    let mut eigenvalues = vec![1.0 / nf; n];
    eigenvalues[n - 1] = 1.0 / nf + a_n;
    let logdet = (nf * a_n).ln_1p() - nf * nf.ln();
    let c = a_n / (nf * a_n + 1.0);
    let inverse = SymmetricMatrix::from_fn(n, |i, j| if i == j { nf * (1.0 - c) } else { -nf * c })
        .expect("n is positive");
    Sigma1ClosedForm { eigenvalues, logdet, inverse }
}

/// Eigenvalues of `C_n`, shared by every `α` of a sweep.
#[derive(Debug, Clone)]
struct FbmSpectrum {
    n: usize,
    eigenvalues: Vec<f64>,
}

impl FbmSpectrum {
    fn new(hurst: f64, n: usize) -> Result<Self> {
        let cov = fbm_increment_covariance(hurst, n)?;
        Ok(Self { n, eigenvalues: symmetric_eigenvalues(&cov.matrix)? })
    }

    fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.n - 1]
    }

    fn entropy(&self, p: &ModelParams) -> f64 {
        let scale = self.n as f64 * p.alpha * p.alpha;
        let spectral: f64 = self
            .eigenvalues
            .iter()
            .map(|l| {
                let k = scale * l;
                k - k.ln_1p()
            })
            .sum();
        let e = p.drift_energy();
        let correction = if e == 0.0 { 0.0 } else { -e * p.alpha * p.alpha / (e + 1.0) + e.ln_1p() };
        0.5 * (spectral + correction)
    }

    fn lower_bound(&self, p: &ModelParams) -> f64 {
        let nf = self.n as f64;
        let theta = theta_n(p.hurst, self.n);
        let a2 = p.alpha * p.alpha;
        0.5 * (theta * a2 - nf * (nf * a2 * self.lambda_max()).ln_1p())
    }
}

/// `θ_n = n^{2−2H} − 1`.
pub fn theta_n(hurst: f64, n: usize) -> f64 {
    (n as f64).powf(2.0 - 2.0 * hurst) - 1.0
}

fn check_entropy_scope(params: &ModelParams, n: usize) -> Result<()> {
    check_n(n)?;
    if n == 1 && params.mu != 0.0 {
        return Err(Error::domain(
            "n = 1 is only covered for mu = 0; use n >= 2 for a drifted market",
        ));
    }
    Ok(())
}

/// Relative entropy of `Q^{α,n}` with respect to the drifted grid measure,
/// in nats, from the eigenvalues of `C_n`.
pub fn relative_entropy_grid(params: &ModelParams, n: usize) -> Result<f64> {
    check_entropy_scope(params, n)?;
    Ok(FbmSpectrum::new(params.hurst, n)?.entropy(params))
}

/// `½(θ_n α² − n·ln(1 + nα²λ_max))`, a lower bound for the entropy that
/// diverges in `α`.
pub fn entropy_lower_bound(params: &ModelParams, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("the entropy lower bound needs n >= 2"));
    }
    Ok(FbmSpectrum::new(params.hurst, n)?.lower_bound(params))
}

/// `H(Q|Q_μ) − [H(Q|Q_W) − ½μ²α⁴/(μ²α²+σ²) + ½ln((μ²α²+σ²)/σ²)]`, with both
/// entropies from the generic Gaussian formula.
pub fn wiener_relation_residual(params: &ModelParams, n: usize) -> Result<f64> {
    check_n(n)?;
    let mixed = mixed_measure(params, n)?;
    let lhs = gaussian_kl(&mixed, &drift_measure(params, n)?)?;
    let wiener = gaussian_kl(&mixed, &wiener_measure(n)?)?;
    let (mu2a2, s2) = ((params.mu * params.alpha).powi(2), params.sigma * params.sigma);
    let rhs = wiener - 0.5 * mu2a2 * params.alpha * params.alpha / (mu2a2 + s2)
        + 0.5 * ((mu2a2 + s2) / s2).ln();
    Ok(lhs - rhs)
}

/// One `α` of an entropy sweep. `lower_bound` is absent for `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub alpha: f64,
    pub n: usize,
    pub hurst: f64,
    pub mu: f64,
    pub sigma: f64,
    pub entropy: f64,
    pub lower_bound: Option<f64>,
    pub entropy_wrt_wiener: f64,
    pub theta_n: f64,
    pub lambda_max: f64,
    pub loglr_variance: f64,
}

/// Checks that `alphas` is non-empty, positive, finite and strictly increasing.
pub fn validate_alpha_grid(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidGrid("alpha grid is empty".into()));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidGrid(format!("alpha values must be positive and finite, got {a}")));
    }
    if let Some(w) = alphas.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid(format!(
            "alpha values must be strictly increasing, found {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

pub fn entropy_sweep(market: &MarketParams, n: usize, alphas: &[f64]) -> Result<Vec<EntropyRow>> {
    validate_alpha_grid(alphas)?;
    let first = market.with_alpha(alphas[0])?;
    check_entropy_scope(&first, n)?;
    let spectrum = FbmSpectrum::new(market.hurst, n)?;
    let wiener = wiener_measure(n)?;
    alphas
        .par_iter()
        .map(|&alpha| {
            let params = market.with_alpha(alpha)?;
            let mixed = mixed_measure(&params, n)?;
            let drift = drift_measure(&params, n)?;
            Ok(EntropyRow {
                alpha,
                n,
                hurst: market.hurst,
                mu: market.mu,
                sigma: market.sigma,
                entropy: spectrum.entropy(&params),
                lower_bound: (n >= 2).then(|| spectrum.lower_bound(&params)),
                entropy_wrt_wiener: gaussian_kl(&mixed, &wiener)?,
                theta_n: theta_n(market.hurst, n),
                lambda_max: spectrum.lambda_max(),
                loglr_variance: loglr_moments(&mixed, &drift)?.var_under_p1,
            })
        })
        .collect()
}
