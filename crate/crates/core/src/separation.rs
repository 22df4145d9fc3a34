//! Explicit separating sets `A = {ln L > c}` and the strong asymptotic
//! arbitrage verdict.
//!
//! In a complete market, strong asymptotic arbitrage along `α → ∞` is
//! equivalent to entire asymptotic separation of the objective laws from the
//! martingale laws. For every `α` this module estimates the probability of one
//! likelihood-ratio event under both laws: it should tend to one under the
//! mixed law and to zero under the drifted Brownian law.

use crate::error::{Error, Result};
use crate::fbm::{sample_drifted_bm_increments, sample_mixed_increments, IncrementSample};
use crate::market::{drift_measure, mixed_measure, validate_alpha_grid, MarketParams, ModelParams};
use crate::measures::{
    dichotomy_classify_with, gaussian_kl, loglr_moments, DichotomyThresholds, DichotomyVerdict,
    GaussianMeasure, LogLikelihoodRatio, Verdict,
};
use crate::numerics::SeededStream;
use crate::stats::Proportion;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const MIXED_LABEL: u64 = 0x006d_6978_6564;
const DRIFT_LABEL: u64 = 0x0064_7269_6674;
pub const MIN_SAMPLES: usize = 100;

/// Pair of Gaussian laws indexed by `α`, with a sampler for each side.
pub trait MeasureFamily: Sync {
    fn measures(&self, alpha: f64) -> Result<(GaussianMeasure, GaussianMeasure)>;
    fn sample_first(&self, alpha: f64, count: usize, stream: &SeededStream) -> Result<IncrementSample>;
    fn sample_second(&self, alpha: f64, count: usize, stream: &SeededStream) -> Result<IncrementSample>;
}

/// `Q^{α,n}` against the drifted Brownian grid law of a market.
#[derive(Debug, Clone, Copy)]
pub struct MarketFamily {
    pub market: MarketParams,
    pub n: usize,
}

impl MarketFamily {
    pub fn new(market: MarketParams, n: usize) -> Result<Self> {
        if n < 1 || (n == 1 && market.mu != 0.0) {
            return Err(Error::domain(format!(
                "separation needs n >= 2, or n = 1 with mu = 0 (got n = {n}, mu = {})",
                market.mu
            )));
        }
        Ok(Self { market, n })
    }

    fn params(&self, alpha: f64) -> Result<ModelParams> {
        self.market.with_alpha(alpha)
    }
}

impl MeasureFamily for MarketFamily {
    fn measures(&self, alpha: f64) -> Result<(GaussianMeasure, GaussianMeasure)> {
        let p = self.params(alpha)?;
        Ok((mixed_measure(&p, self.n)?, drift_measure(&p, self.n)?))
    }

    fn sample_first(&self, alpha: f64, count: usize, stream: &SeededStream) -> Result<IncrementSample> {
        sample_mixed_increments(&self.params(alpha)?, self.n, count, stream)
    }

    fn sample_second(&self, alpha: f64, count: usize, stream: &SeededStream) -> Result<IncrementSample> {
        sample_drifted_bm_increments(&self.params(alpha)?, self.n, count, stream)
    }
}

/// Degenerate family whose two sides are the same mixed law, standing in for a
/// market without separation.
#[derive(Debug, Clone, Copy)]
pub struct SameLawFamily {
    pub market: MarketParams,
    pub n: usize,
}

impl MeasureFamily for SameLawFamily {
    fn measures(&self, alpha: f64) -> Result<(GaussianMeasure, GaussianMeasure)> {
        let m = mixed_measure(&self.market.with_alpha(alpha)?, self.n)?;
        Ok((m.clone(), m))
    }

    fn sample_first(&self, alpha: f64, count: usize, stream: &SeededStream) -> Result<IncrementSample> {
        sample_mixed_increments(&self.market.with_alpha(alpha)?, self.n, count, stream)
    }

    fn sample_second(&self, alpha: f64, count: usize, stream: &SeededStream) -> Result<IncrementSample> {
        self.sample_first(alpha, count, stream)
    }
}

/// How the cut-off `c` of `A = {ln L > c}` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy", content = "value")]
pub enum ThresholdPolicy {
    Fixed(f64),
    /// Halfway between the means of `ln L` under the two laws,
    /// `(H(P₁|P₂) − H(P₂|P₁))/2`.
    Midpoint,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::Fixed(0.0)
    }
}

impl ThresholdPolicy {
    pub fn resolve(&self, p1: &GaussianMeasure, p2: &GaussianMeasure) -> Result<f64> {
        match *self {
            ThresholdPolicy::Fixed(c) => Ok(c),
            ThresholdPolicy::Midpoint => Ok(0.5 * (gaussian_kl(p1, p2)? - gaussian_kl(p2, p1)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationConfig {
    pub threshold: ThresholdPolicy,
    pub dichotomy: DichotomyThresholds,
    /// Minimum `p_mixed` on the last row for an arbitrage verdict.
    pub min_p_mixed: f64,
    /// Maximum `p_drift` on the last row for an arbitrage verdict.
    pub max_p_drift: f64,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        Self {
            threshold: ThresholdPolicy::default(),
            dichotomy: DichotomyThresholds::default(),
            min_p_mixed: 0.99,
            max_p_drift: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub alpha: f64,
    pub threshold: f64,
    /// Estimated mass of `A` under the mixed (objective) law.
    pub p_mixed: Proportion,
    /// Estimated mass of `A` under the drifted Brownian (martingale) law.
    pub p_drift: Proportion,
    pub samples: usize,
}

impl SeparationRow {
    pub fn gap(&self) -> f64 {
        self.p_mixed.p - self.p_drift.p
    }

    pub fn gap_se(&self) -> f64 {
        self.p_mixed.se.hypot(self.p_drift.se)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaaConclusion {
    #[serde(rename = "SAA-evidence")]
    SaaEvidence,
    #[serde(rename = "no-SAA-evidence")]
    NoSaaEvidence,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl SaaConclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            SaaConclusion::SaaEvidence => "SAA-evidence",
            SaaConclusion::NoSaaEvidence => "no-SAA-evidence",
            SaaConclusion::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub rows: Vec<SeparationRow>,
    pub verdict: DichotomyVerdict,
    pub saa_conclusion: SaaConclusion,
}

/// Masses of `{y : ln L(y) > threshold}` under both laws of `family` at `alpha`.
/// The boundary `ln L = threshold` is excluded.
pub fn family_separation_row<F: MeasureFamily + ?Sized>(
    family: &F,
    alpha: f64,
    threshold: f64,
    count: usize,
    stream: &SeededStream,
) -> Result<SeparationRow> {
    if count < MIN_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_SAMPLES, found: count });
    }
    let (p1, p2) = family.measures(alpha)?;
    let llr = LogLikelihoodRatio::new(&p1, &p2)?;
    let mass = |sample: IncrementSample| -> Result<Proportion> {
        let hits: Vec<bool> = sample
            .data
            .par_chunks(sample.n)
            .map(|y| llr.eval(y).map(|l| l > threshold))
            .collect::<Result<_>>()?;
        Ok(Proportion::from_hits(hits.iter().filter(|&&h| h).count(), count))
    };
    let p_mixed = mass(family.sample_first(alpha, count, &stream.fork(MIXED_LABEL))?)?;
    let p_drift = mass(family.sample_second(alpha, count, &stream.fork(DRIFT_LABEL))?)?;
    Ok(SeparationRow { alpha, threshold, p_mixed, p_drift, samples: count })
}

pub fn separating_set_probabilities(
    params: &ModelParams,
    n: usize,
    threshold: f64,
    count: usize,
    stream: &SeededStream,
) -> Result<SeparationRow> {
    let family = MarketFamily::new(params.market(), n)?;
    family_separation_row(&family, params.alpha, threshold, count, stream)
}

/// Runs the separation experiment over `alphas` for an arbitrary family.
///
/// Row `α` draws from `stream.fork(α.to_bits())`, so a row does not depend on
/// the rest of the grid.
pub fn run_separation<F: MeasureFamily + ?Sized>(
    family: &F,
    alphas: &[f64],
    count: usize,
    stream: &SeededStream,
    config: &SeparationConfig,
) -> Result<SeparationReport> {
    validate_alpha_grid(alphas)?;
    if alphas.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, found: alphas.len() });
    }
    let per_alpha: Vec<_> = alphas
        .par_iter()
        .map(|&alpha| {
            let (p1, p2) = family.measures(alpha)?;
            let moments = loglr_moments(&p1, &p2)?;
            let threshold = config.threshold.resolve(&p1, &p2)?;
            let row = family_separation_row(family, alpha, threshold, count, &stream.fork(alpha.to_bits()))?;
            Ok(((alpha, moments), row))
        })
        .collect::<Result<_>>()?;
    let (sweep, rows): (Vec<_>, Vec<_>) = per_alpha.into_iter().unzip();
    let verdict = dichotomy_classify_with(&sweep, &config.dichotomy)?;
    let last: &SeparationRow = rows.last().expect("grid has at least three points");
    let saa_conclusion = match verdict.verdict {
        Verdict::EntirelySeparableTrend
            if last.p_mixed.p >= config.min_p_mixed && last.p_drift.p <= config.max_p_drift =>
        {
            SaaConclusion::SaaEvidence
        }
        Verdict::ContiguityCompatible => SaaConclusion::NoSaaEvidence,
        _ => SaaConclusion::Inconclusive,
    };
    Ok(SeparationReport { rows, verdict, saa_conclusion })
}

pub fn saa_experiment(
    market: &MarketParams,
    n: usize,
    alphas: &[f64],
    count: usize,
    stream: &SeededStream,
    config: &SeparationConfig,
) -> Result<SeparationReport> {
    run_separation(&MarketFamily::new(*market, n)?, alphas, count, stream, config)
}
