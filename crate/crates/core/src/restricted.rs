//! The one-period market `S₁ = exp(σ(Z₁ + B₁/α) − σ²/(2α²))` on `t ∈ {0, 1}`.
//!
//! Besides the Wiener measure this market has a second martingale measure
//! `P̃` with `dP̃/dP = g(X)`, `X = exp(σZ₁)`, `g(x) = e^{−x}/h(x)` and `h` the
//! lognormal density of `X`. Under `P̃`, `X` is Exponential(1) and independent
//! of `B₁`, so `E_P̃[S₁] = E[X] = 1` for every `α`. Under `P`, `S₁ − 1` keeps
//! both a positive and a negative part as `α → ∞`, which rules out an
//! asymptotic arbitrage built from constant positions.

use crate::error::{Error, Result};
use crate::market::validate_alpha_grid;
use crate::numerics::SeededStream;
use crate::stats::{Estimate, Proportion};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const QUADRATURE_NODES: usize = 10_000;
pub const QUADRATURE_RANGE: (f64, f64) = (1e-12, 1e3);
/// Grid on which positivity of `g` is checked.
pub const POSITIVITY_RANGE: (f64, f64) = (1e-6, 1e3);
pub const MIN_SAMPLES: usize = 10_000;

const TILT_X: u64 = 1;
const TILT_B: u64 = 2;
const OBJECTIVE_Z: u64 = 3;
const OBJECTIVE_B: u64 = 4;

fn check_x_sigma(x: f64, sigma: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be positive and finite, got {x}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

fn ln_lognormal_density(x: f64, sigma: f64) -> f64 {
    let z = x.ln() / sigma;
    -0.5 * z * z - (TAU.sqrt() * sigma * x).ln()
}

/// Density of `exp(σZ)`, `Z ~ N(0, 1)`:
/// `h(x) = exp(−½(ln x/σ)²)/(√(2π)σx)`.
pub fn lognormal_density(x: f64, sigma: f64) -> Result<f64> {
    check_x_sigma(x, sigma)?;
    Ok(ln_lognormal_density(x, sigma).exp())
}

/// `ln g(x) = −x − ln h(x)`.
pub fn ln_tilt_weight(x: f64, sigma: f64) -> Result<f64> {
    check_x_sigma(x, sigma)?;
    Ok(-x - ln_lognormal_density(x, sigma))
}

/// `g(x) = e^{−x}/h(x)`, evaluated as `exp(ln g(x))`. Underflows to zero for
/// `x` beyond roughly 700; use [`ln_tilt_weight`] there.
pub fn tilt_weight(x: f64, sigma: f64) -> Result<f64> {
    Ok(ln_tilt_weight(x, sigma)?.exp())
}

/// Trapezoid rule for `∫ f(x) dx` over `[lo, hi]` on `nodes` log-spaced
/// points (integrating `x·f(x)` in `u = ln x`).
pub fn log_grid_trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, nodes: usize) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    let h = (b - a) / (nodes - 1) as f64;
    let mut acc = 0.0;
    for k in 0..nodes {
        let x = (a + h * k as f64).exp();
        let w = if k == 0 || k == nodes - 1 { 0.5 } else { 1.0 };
        acc += w * x * f(x);
    }
    acc * h
}

/// `∫ x^power·g(x)·h(x) dx` by log-grid quadrature. The product `g·h` is
/// formed in the log domain so that large `g` near zero cannot overflow.
fn tilted_moment(sigma: f64, power: i32) -> f64 {
    let (lo, hi) = QUADRATURE_RANGE;
    log_grid_trapezoid(
        |x| {
            let ln_h = ln_lognormal_density(x, sigma);
            let ln_g = -x - ln_h;
            x.powi(power) * (ln_g + ln_h).exp()
        },
        lo,
        hi,
        QUADRATURE_NODES,
    )
}

/// `E_P[g(X)] = ∫ g·h`, which must be one.
pub fn tilt_mass(sigma: f64) -> Result<f64> {
    check_x_sigma(1.0, sigma)?;
    Ok(tilted_moment(sigma, 0))
}

/// Smallest `ln g(x)` on a log grid over [`POSITIVITY_RANGE`]; `g > 0` on the
/// grid iff this is finite.
pub fn min_ln_tilt_weight(sigma: f64) -> Result<f64> {
    let (lo, hi) = POSITIVITY_RANGE;
    let nodes = 1_000;
    let step = (hi / lo).ln() / (nodes - 1) as f64;
    (0..nodes)
        .map(|k| ln_tilt_weight(lo * (step * k as f64).exp(), sigma))
        .try_fold(f64::INFINITY, |m, g| Ok(m.min(g?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedConfig {
    pub sigma: f64,
    pub alphas: Vec<f64>,
    /// Payoff margin: events `S₁ > 1 + δ` and `S₁ < 1 − δ`.
    pub delta: f64,
    pub count: usize,
}

impl Default for RestrictedConfig {
    fn default() -> Self {
        Self { sigma: 1.0, alphas: vec![10.0, 30.0, 100.0], delta: 0.1, count: 1_000_000 }
    }
}

impl RestrictedConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::domain(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.count < MIN_SAMPLES {
            return Err(Error::InsufficientData { needed: MIN_SAMPLES, found: self.count });
        }
        validate_alpha_grid(&self.alphas)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestrictedRow {
    pub alpha: f64,
    /// `E_P̃[S₁]`, sampled with `X ~ Exp(1)` and `B ~ N(0, 1)`.
    pub e_s1: Estimate,
    /// `P(S₁ > 1 + δ)`.
    pub up_probability: Proportion,
    /// `P(S₁ < 1 − δ)`.
    pub down_probability: Proportion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedReport {
    pub sigma: f64,
    pub delta: f64,
    pub tilt_mass: f64,
    /// `∫ x·g·h`, the martingale identity in quadrature form.
    pub tilt_first_moment: f64,
    /// Finite means `g > 0` across [`POSITIVITY_RANGE`].
    pub min_ln_tilt_weight: f64,
    pub rows: Vec<RestrictedRow>,
}

fn restricted_row(config: &RestrictedConfig, alpha: f64, stream: &SeededStream) -> RestrictedRow {
    let sigma = config.sigma;
    let stream = stream.fork(alpha.to_bits());
    let (tx, tb) = (stream.fork(TILT_X), stream.fork(TILT_B));
    let (oz, ob) = (stream.fork(OBJECTIVE_Z), stream.fork(OBJECTIVE_B));
    let compensator = sigma * sigma / (2.0 * alpha * alpha);

    let tilted: Vec<f64> = (0..config.count as u64)
        .into_par_iter()
        .map(|i| tx.exponential(i) * (sigma * tb.normal(i) / alpha - compensator).exp())
        .collect();

    let (up_hi, down_lo) = (1.0 + config.delta, 1.0 - config.delta);
    let sides: Vec<(bool, bool)> = (0..config.count as u64)
        .into_par_iter()
        .map(|i| {
            let s1 = (sigma * (oz.normal(i) + ob.normal(i) / alpha) - compensator).exp();
            (s1 > up_hi, s1 < down_lo)
        })
        .collect();
    let up = sides.iter().filter(|s| s.0).count();
    let down = sides.iter().filter(|s| s.1).count();

    RestrictedRow {
        alpha,
        e_s1: Estimate::from_samples(&tilted),
        up_probability: Proportion::from_hits(up, config.count),
        down_probability: Proportion::from_hits(down, config.count),
    }
}

pub fn restricted_market_report(config: &RestrictedConfig, stream: &SeededStream) -> Result<RestrictedReport> {
    config.validate()?;
    let rows = config.alphas.iter().map(|&a| restricted_row(config, a, stream)).collect();
    Ok(RestrictedReport {
        sigma: config.sigma,
        delta: config.delta,
        tilt_mass: tilt_mass(config.sigma)?,
        tilt_first_moment: tilted_moment(config.sigma, 1),
        min_ln_tilt_weight: min_ln_tilt_weight(config.sigma)?,
        rows,
    })
}
