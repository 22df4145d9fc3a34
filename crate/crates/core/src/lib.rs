//! Relative entropy and asymptotic separation for mixed fractional
//! Black-Scholes markets.
//!
//! The grid observation `Y_n` of the mixed process `αZ^H + B` on `[0, 1]` is a
//! centred Gaussian vector with covariance `Σ₀ = I/n + α²C_n`, where `C_n` is
//! the covariance of fractional Brownian motion increments. The martingale
//! measure of the `α`-market is described by a drifted Brownian motion, giving
//! `Σ₁ = (I + a_n·11ᵀ)/n`. This crate computes the relative entropy between
//! the two laws in closed form, checks it against generic Gaussian formulas and
//! Monte Carlo estimators, builds explicit separating sets from the
//! log-likelihood ratio, and evaluates the single-period restricted market in
//! which the asymptotic arbitrage disappears.
//!
//! Module map:
//!
//! * [`numerics`]: dense symmetric matrices, Cholesky factors, eigenvalues and
//!   a counter-based normal stream.
//! * [`fbm`]: increment covariance `C_n` and exact samplers for `Y_n`.
//! * [`measures`]: Gaussian measures, relative entropy, log-likelihood ratio
//!   statistics, entropy estimators and the dichotomy classifier.
//! * [`market`]: `Σ₀`/`Σ₁`, the eigenvalue form of the entropy and its bound.
//! * [`separation`]: separating sets and the strong asymptotic arbitrage
//!   verdict.
//! * [`restricted`]: exponential tilt and two-sided risk in the one-period
//!   market.
//! * [`export`]: CSV writers shared by the command-line front end.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod fbm;
pub mod market;
pub mod measures;
pub mod numerics;
pub mod restricted;
pub mod separation;
pub mod stats;

pub use error::{Error, Result};
pub use fbm::{FbmCovariance, IncrementSample};
pub use market::{EntropyRow, MarketParams, ModelMatrices, ModelParams};
pub use measures::{DichotomyVerdict, GaussianMeasure, LogLRStats, Verdict};
pub use numerics::{CholeskyFactor, SeededStream, SymmetricMatrix};
pub use separation::{SaaConclusion, SeparationReport, SeparationRow};
pub use stats::{Estimate, Proportion};
