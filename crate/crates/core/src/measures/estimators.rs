//! Monte Carlo and partition-based estimators of relative entropy.

use super::{GaussianMeasure, LogLikelihoodRatio};
use crate::error::{Error, Result};
use crate::numerics::SeededStream;
use crate::stats::{normal_cdf, Estimate};
use rayon::prelude::*;

/// `ln φ` is clamped here before exponentiating in the tilted estimator.
pub const LOG_PHI_CLAMP: f64 = 700.0;

const FIRST_STREAM: u64 = 1;
const SECOND_STREAM: u64 = 2;
const MAX_CELLS: usize = 1 << 24;

/// Sample budget and randomness for a Monte Carlo estimate.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo {
    pub count: usize,
    pub stream: SeededStream,
}

/// The two Monte Carlo forms of relative entropy:
/// `E_{P₁}[ln φ]` and `E_{P₂}[φ ln φ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlCheck {
    pub forward: Estimate,
    pub tilted: Estimate,
    /// Set when some `ln φ` exceeded [`LOG_PHI_CLAMP`] in the tilted form.
    pub overflow_flagged: bool,
}

pub fn mc_kl_check(
    p1: &GaussianMeasure,
    p2: &GaussianMeasure,
    count: usize,
    stream: &SeededStream,
) -> Result<KlCheck> {
    if count < 2 {
        return Err(Error::InsufficientData { needed: 2, found: count });
    }
    let llr = LogLikelihoodRatio::new(p1, p2)?;

    let from_p1 = p1.sample(count, &stream.fork(FIRST_STREAM));
    let forward: Vec<f64> = from_p1
        .data
        .par_chunks(p1.dim())
        .map(|y| llr.eval(y))
        .collect::<Result<_>>()?;

    let from_p2 = p2.sample(count, &stream.fork(SECOND_STREAM));
    let log_phi: Vec<f64> = from_p2
        .data
        .par_chunks(p2.dim())
        .map(|y| llr.eval(y))
        .collect::<Result<_>>()?;
    let overflow_flagged = log_phi.iter().any(|&l| l > LOG_PHI_CLAMP);
    let tilted: Vec<f64> = log_phi
        .iter()
        .map(|&l| {
            let l = l.min(LOG_PHI_CLAMP);
            l.exp() * l
        })
        .collect();

    Ok(KlCheck {
        forward: Estimate::from_samples(&forward),
        tilted: Estimate::from_samples(&tilted),
        overflow_flagged,
    })
}

/// Axis-aligned grid partition of `ℝⁿ` into half-open boxes.
///
/// Axis `k` is cut at the strictly increasing finite points `cuts[k]`,
/// giving intervals `(−∞, c₀), [c₀, c₁), …, [c_last, ∞)`. The cells are the
/// products of one interval per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPartition {
    cuts: Vec<Vec<f64>>,
}

impl GridPartition {
    pub fn new(cuts: Vec<Vec<f64>>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::InvalidPartition("partition needs at least one axis".into()));
        }
        for (axis, c) in cuts.iter().enumerate() {
            if let Some(x) = c.iter().find(|x| !x.is_finite()) {
                return Err(Error::InvalidPartition(format!(
                    "axis {axis}: cut point {x} is not finite"
                )));
            }
            if let Some(w) = c.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPartition(format!(
                    "axis {axis}: cut points {} and {} overlap or are out of order",
                    w[0], w[1]
                )));
            }
        }
        let cells = cuts
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len() + 1))
            .filter(|&c| c <= MAX_CELLS);
        if cells.is_none() {
            return Err(Error::InvalidPartition(format!("more than {MAX_CELLS} cells")));
        }
        Ok(Self { cuts })
    }

    /// The single-cell partition `{ℝⁿ}`.
    pub fn whole_space(dim: usize) -> Self {
        Self { cuts: vec![Vec::new(); dim.max(1)] }
    }

    /// Same cuts on every axis.
    pub fn uniform(dim: usize, cuts: &[f64]) -> Result<Self> {
        Self::new(vec![cuts.to_vec(); dim])
    }

    pub fn dim(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[Vec<f64>] {
        &self.cuts
    }

    pub fn cell_count(&self) -> usize {
        self.cuts.iter().map(|c| c.len() + 1).product()
    }

    /// Mixed-radix index of the cell containing `y`.
    pub fn cell_of(&self, y: &[f64]) -> usize {
        self.cuts.iter().zip(y).fold(0, |idx, (c, &v)| {
            idx * (c.len() + 1) + c.partition_point(|&cut| cut <= v)
        })
    }
}

/// `Σ_F P₁(F) ln(P₁(F)/P₂(F))` over the cells of `partition`.
///
/// One-dimensional partitions use exact normal CDF differences (zero standard
/// error). In higher dimensions the cell probabilities are estimated from
/// `mc.count` draws of each measure and the standard error comes from the
/// delta method.
pub fn partition_kl(
    p1: &GaussianMeasure,
    p2: &GaussianMeasure,
    partition: &GridPartition,
    mc: &MonteCarlo,
) -> Result<Estimate> {
    p1.check_dim(p2.dim())?;
    p1.check_dim(partition.dim())?;
    if p1.dim() == 1 {
        let q1 = interval_probabilities(p1, &partition.cuts[0]);
        let q2 = interval_probabilities(p2, &partition.cuts[0]);
        return Ok(Estimate::exact(discrete_kl(&q1, &q2)));
    }
    if mc.count < 2 {
        return Err(Error::InsufficientData { needed: 2, found: mc.count });
    }
    let freq = |p: &GaussianMeasure, label: u64| {
        let sample = p.sample(mc.count, &mc.stream.fork(label));
        let mut hits = vec![0usize; partition.cell_count()];
        for y in sample.rows() {
            hits[partition.cell_of(y)] += 1;
        }
        hits.into_iter().map(|h| h as f64 / mc.count as f64).collect::<Vec<_>>()
    };
    let q1 = freq(p1, FIRST_STREAM);
    let q2 = freq(p2, SECOND_STREAM);
    let value = discrete_kl(&q1, &q2);
    if !value.is_finite() {
        return Ok(Estimate { value, se: f64::NAN });
    }
    // Gradient of Σ p ln(p/q): ∂/∂p = ln(p/q) + 1, ∂/∂q = −p/q; each frequency
    // vector is multinomial with covariance (diag(p) − ppᵀ)/N.
    let multinomial_var = |probs: &[f64], grad: &dyn Fn(usize) -> f64| {
        let (mut m1, mut m2) = (0.0, 0.0);
        for (j, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                let g = grad(j);
                m1 += g * p;
                m2 += g * g * p;
            }
        }
        (m2 - m1 * m1).max(0.0) / mc.count as f64
    };
    let var1 = multinomial_var(&q1, &|j| {
        if q1[j] > 0.0 { (q1[j] / q2[j]).ln() + 1.0 } else { 0.0 }
    });
    let var2 = multinomial_var(&q2, &|j| if q2[j] > 0.0 { -q1[j] / q2[j] } else { 0.0 });
    Ok(Estimate { value, se: (var1 + var2).sqrt() })
}

fn interval_probabilities(p: &GaussianMeasure, cuts: &[f64]) -> Vec<f64> {
    let (m, s) = (p.mean()[0], p.cov().get(0, 0).sqrt());
    let z: Vec<f64> = cuts.iter().map(|c| (c - m) / s).collect();
    let mut probs = Vec::with_capacity(z.len() + 1);
    let mut lo = f64::NEG_INFINITY;
    for &hi in z.iter().chain(std::iter::once(&f64::INFINITY)) {
        // Upper-tail cells are differenced on the mirrored side for accuracy.
        let mass = if lo >= 0.0 {
            normal_cdf(-lo) - normal_cdf(-hi)
        } else {
            normal_cdf(hi) - normal_cdf(lo)
        };
        probs.push(mass.max(0.0));
        lo = hi;
    }
    probs
}

/// Discrete relative entropy with `0 ln 0 = 0` and `p ln(p/0) = +∞`.
fn discrete_kl(q1: &[f64], q2: &[f64]) -> f64 {
    q1.iter()
        .zip(q2)
        .map(|(&a, &b)| {
            if a == 0.0 {
                0.0
            } else if b == 0.0 {
                f64::INFINITY
            } else {
                a * (a / b).ln()
            }
        })
        .sum()
}
