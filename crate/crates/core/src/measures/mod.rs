//! Gaussian measures on `ℝⁿ` and the statistics of their likelihood ratio.

mod dichotomy;
mod estimators;
mod gaussian;
mod kl;

pub use dichotomy::{
    dichotomy_classify, dichotomy_classify_with, DichotomyThresholds, DichotomyVerdict,
    EvidencePoint, Verdict,
};
pub use estimators::{mc_kl_check, partition_kl, GridPartition, KlCheck, MonteCarlo};
pub use gaussian::GaussianMeasure;
pub use kl::{gaussian_kl, log_likelihood_ratio, loglr_moments, LogLRStats, LogLikelihoodRatio};
