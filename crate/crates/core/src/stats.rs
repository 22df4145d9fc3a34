//! Small summary-statistics helpers shared by the Monte Carlo routines.
//!
//! All reductions run sequentially over a slice in index order, so a result
//! depends only on the values and never on how they were produced in parallel.

use serde::{Deserialize, Serialize};
use libm::erfc;
use std::f64::consts::SQRT_2;

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, se: 0.0 }
    }

    /// Sample mean and `s/√N` of `xs`.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { value: f64::NAN, se: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self { value: mean, se: f64::NAN };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Self { value: mean, se: (var / n as f64).sqrt() }
    }

    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.se
    }
}

/// A Bernoulli proportion with binomial standard error `√(p(1−p)/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub p: f64,
    pub se: f64,
    pub count: usize,
}

impl Proportion {
    pub fn from_hits(hits: usize, count: usize) -> Self {
        let p = hits as f64 / count as f64;
        Self { p, se: (p * (1.0 - p) / count as f64).sqrt(), count }
    }
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}
