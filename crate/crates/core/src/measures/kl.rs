use super::GaussianMeasure;
use crate::error::{Error, Result};
use crate::numerics::{symmetric_eigenvalues, SymmetricMatrix};
use serde::{Deserialize, Serialize};

/// Mean and variance of `ln(dP₁/dP₂)` under `P₁`, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLRStats {
    pub mean_under_p1: f64,
    pub var_under_p1: f64,
}

fn check_pair(p1: &GaussianMeasure, p2: &GaussianMeasure) -> Result<()> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { expected: p1.dim(), found: p2.dim() });
    }
    Ok(())
}

/// `H(P₁|P₂) = ½[tr(Σ₂⁻¹Σ₁) − n + (m₂−m₁)ᵀΣ₂⁻¹(m₂−m₁) + ln det Σ₂ − ln det Σ₁]`.
///
/// The trace is assembled column by column from Cholesky solves against
/// `Σ₂`; determinants stay in the log domain.
pub fn gaussian_kl(p1: &GaussianMeasure, p2: &GaussianMeasure) -> Result<f64> {
    check_pair(p1, p2)?;
    if p1 == p2 {
        return Ok(0.0);
    }
    let n = p1.dim();
    let f2 = p2.factor();
    let mut trace = 0.0;
    for j in 0..n {
        let col = f2.solve(p1.cov().row(j))?;
        trace += col[j];
    }
    let delta: Vec<f64> = p2.mean().iter().zip(p1.mean()).map(|(a, b)| a - b).collect();
    let solved = f2.solve(&delta)?;
    let quad: f64 = delta.iter().zip(&solved).map(|(a, b)| a * b).sum();
    Ok(0.5 * (trace - n as f64 + quad + f2.logdet() - p1.factor().logdet()))
}

/// Evaluator for `ln φ(y)` with `φ = dP₁/dP₂`, sharing the normalising
/// constant across calls.
#[derive(Debug, Clone, Copy)]
pub struct LogLikelihoodRatio<'a> {
    p1: &'a GaussianMeasure,
    p2: &'a GaussianMeasure,
    half_logdet_gap: f64,
}

impl<'a> LogLikelihoodRatio<'a> {
    pub fn new(p1: &'a GaussianMeasure, p2: &'a GaussianMeasure) -> Result<Self> {
        check_pair(p1, p2)?;
        let half_logdet_gap = 0.5 * (p2.factor().logdet() - p1.factor().logdet());
        Ok(Self { p1, p2, half_logdet_gap })
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        let q1 = self.p1.mahalanobis_sq(y)?;
        let q2 = self.p2.mahalanobis_sq(y)?;
        Ok(self.half_logdet_gap + 0.5 * (q2 - q1))
    }
}

/// `ln` of the density ratio `p₁(y)/p₂(y)`.
pub fn log_likelihood_ratio(p1: &GaussianMeasure, p2: &GaussianMeasure, y: &[f64]) -> Result<f64> {
    LogLikelihoodRatio::new(p1, p2)?.eval(y)
}

/// Closed-form moments of `ln φ` under `P₁`.
///
/// Works in coordinates whitened by `Σ₂`: with `A = L₂⁻¹Σ₁L₂⁻ᵀ`
/// (eigenvalues `ν`) and `u = L₂⁻¹(m₁ − m₂)`,
/// mean `= ½Σ(ν − 1 − ln ν) + ½‖u‖²` and
/// variance `= ½Σ(1 − ν)² + uᵀAu`.
pub fn loglr_moments(p1: &GaussianMeasure, p2: &GaussianMeasure) -> Result<LogLRStats> {
    check_pair(p1, p2)?;
    if p1 == p2 {
        return Ok(LogLRStats { mean_under_p1: 0.0, var_under_p1: 0.0 });
    }
    let n = p1.dim();
    let f2 = p2.factor();
    // Column j of L₂⁻¹Σ₁.
    let half: Vec<Vec<f64>> = (0..n)
        .map(|j| f2.forward_solve(p1.cov().row(j)))
        .collect::<Result<_>>()?;
    // A = L₂⁻¹ (L₂⁻¹Σ₁)ᵀ; column i solves against row i of L₂⁻¹Σ₁.
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        let row_i: Vec<f64> = half.iter().map(|col| col[i]).collect();
        let col = f2.forward_solve(&row_i)?;
        for (k, v) in col.into_iter().enumerate() {
            a[k * n + i] = v;
        }
    }
    let a = SymmetricMatrix::from_row_major(n, &a)?;
    let nu = symmetric_eigenvalues(&a)?;
    let delta: Vec<f64> = p1.mean().iter().zip(p2.mean()).map(|(x, y)| x - y).collect();
    let u = f2.forward_solve(&delta)?;
    let u_sq: f64 = u.iter().map(|v| v * v).sum();
    let au = a.mul_vec(&u)?;
    let u_a_u: f64 = u.iter().zip(&au).map(|(x, y)| x * y).sum();

    let mean = 0.5 * nu.iter().map(|v| v - 1.0 - v.ln()).sum::<f64>() + 0.5 * u_sq;
    let var = 0.5 * nu.iter().map(|v| (1.0 - v).powi(2)).sum::<f64>() + u_a_u;
    Ok(LogLRStats { mean_under_p1: mean, var_under_p1: var.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n1(mean: f64, var: f64) -> GaussianMeasure {
        GaussianMeasure::new(vec![mean], SymmetricMatrix::from_row_major(1, &[var]).unwrap())
            .unwrap()
    }

    const KL_2_VS_1: f64 = 0.153_426_409_720_027_35; // ½(1 − ln 2)
    const KL_1_VS_2: f64 = 0.096_573_590_279_972_65; // ½(½ − 1 + ln 2)

    #[test]
    fn kl_of_identical_measures_is_zero() {
        let p = n1(0.3, 1.7);
        assert_eq!(gaussian_kl(&p, &p.clone()).unwrap(), 0.0);
    }

    #[test]
    fn scalar_kl_and_asymmetry() {
        let (a, b) = (n1(0.0, 2.0), n1(0.0, 1.0));
        assert!((gaussian_kl(&a, &b).unwrap() - KL_2_VS_1).abs() < 1e-15);
        assert!((gaussian_kl(&b, &a).unwrap() - KL_1_VS_2).abs() < 1e-15);
    }

    #[test]
    fn scalar_kl_with_mean_shift() {
        // N(0,1) vs N(1,1): ½·1² = 0.5
        assert!((gaussian_kl(&n1(0.0, 1.0), &n1(1.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn llr_examples() {
        let (a, b) = (n1(0.0, 2.0), n1(0.0, 1.0));
        let v = log_likelihood_ratio(&a, &b, &[0.0]).unwrap();
        assert!((v + 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_likelihood_ratio(&a, &a, &[3.7]).unwrap(), 0.0);
        assert!(matches!(
            log_likelihood_ratio(&a, &b, &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn moments_scalar() {
        let s = loglr_moments(&n1(0.0, 2.0), &n1(0.0, 1.0)).unwrap();
        assert!((s.mean_under_p1 - KL_2_VS_1).abs() < 1e-10);
        assert!((s.var_under_p1 - 0.5).abs() < 1e-10);
        let z = loglr_moments(&n1(0.0, 2.0), &n1(0.0, 2.0)).unwrap();
        assert_eq!((z.mean_under_p1, z.var_under_p1), (0.0, 0.0));
    }

    #[test]
    fn moments_scalar_mean_shift() {
        // ln φ = −y + ½ under N(0,1) vs N(1,1): mean ½, variance 1.
        let s = loglr_moments(&n1(0.0, 1.0), &n1(1.0, 1.0)).unwrap();
        assert!((s.mean_under_p1 - 0.5).abs() < 1e-14);
        assert!((s.var_under_p1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let p = GaussianMeasure::centered(SymmetricMatrix::identity(2).unwrap()).unwrap();
        assert!(gaussian_kl(&p, &n1(0.0, 1.0)).is_err());
        assert!(loglr_moments(&p, &n1(0.0, 1.0)).is_err());
    }
}
