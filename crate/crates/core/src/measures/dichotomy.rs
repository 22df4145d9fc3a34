//! Finite-grid heuristic for the contiguity / entire-separation dichotomy.
//!
//! Along a family of Gaussian pairs the likelihood ratios are either tight
//! (mutual contiguity) or the measures separate entirely. Tightness is
//! equivalent to bounded mean and variance of `ln φ`, so the classifier reads
//! the entropy column of a sweep: sustained growth points towards separation,
//! a flat column towards contiguity. Any finite sweep can only give evidence.

use super::LogLRStats;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    EntirelySeparableTrend,
    ContiguityCompatible,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DichotomyThresholds {
    /// Required ratio of the last entropy to the first for a separation trend.
    pub growth_factor: f64,
    /// Maximum ratio of the largest to the smallest entropy for a bounded family.
    pub boundedness_ratio: f64,
}

impl Default for DichotomyThresholds {
    fn default() -> Self {
        Self { growth_factor: 10.0, boundedness_ratio: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidencePoint {
    pub alpha: f64,
    pub entropy: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyVerdict {
    pub verdict: Verdict,
    pub evidence: Vec<EvidencePoint>,
}

pub fn dichotomy_classify(sweep: &[(f64, LogLRStats)]) -> Result<DichotomyVerdict> {
    dichotomy_classify_with(sweep, &DichotomyThresholds::default())
}

/// Classifies a sweep sorted by strictly increasing `α`:
///
/// * `EntirelySeparableTrend` if the entropy strictly increases over the last
///   `⌈len/2⌉` points and the final entropy is at least `growth_factor` times
///   the first;
/// * `ContiguityCompatible` if `max ≤ boundedness_ratio · min`;
/// * `Inconclusive` otherwise.
pub fn dichotomy_classify_with(
    sweep: &[(f64, LogLRStats)],
    thresholds: &DichotomyThresholds,
) -> Result<DichotomyVerdict> {
    if sweep.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, found: sweep.len() });
    }
    if let Some(w) = sweep.windows(2).find(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::InvalidGrid(format!(
            "alpha values must be strictly increasing, found {} then {}",
            w[0].0, w[1].0
        )));
    }
    let entropies: Vec<f64> = sweep.iter().map(|(_, s)| s.mean_under_p1).collect();
    let tail = &entropies[entropies.len() - entropies.len().div_ceil(2)..];
    let increasing_tail = tail.windows(2).all(|w| w[0] < w[1]);
    let first = entropies[0];
    let last = entropies[entropies.len() - 1];
    let max = entropies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = entropies.iter().copied().fold(f64::INFINITY, f64::min);

    let verdict = if increasing_tail && last >= thresholds.growth_factor * first {
        Verdict::EntirelySeparableTrend
    } else if max <= thresholds.boundedness_ratio * min {
        Verdict::ContiguityCompatible
    } else {
        Verdict::Inconclusive
    };
    let evidence = sweep
        .iter()
        .map(|&(alpha, s)| EvidencePoint { alpha, entropy: s.mean_under_p1, variance: s.var_under_p1 })
        .collect();
    Ok(DichotomyVerdict { verdict, evidence })
}
