//! Command-line flags and their per-command defaults.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use crate::config::{parse_alphas, Command, Format, RunConfig, Threshold};

#[derive(Debug, Parser)]
#[command(name = "mfbm", version, about = "Reproducible experiments on mixed fractional Black-Scholes markets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Covariance matrix of fBm increments on an n-point grid.
    Covariance(CovarianceArgs),
    /// Relative entropy of the mixed law against the martingale law over an alpha grid.
    EntropySweep(SweepArgs),
    /// Monte Carlo separating-set experiment with a dichotomy verdict.
    Separate(SeparateArgs),
    /// One-period restricted market: martingale check and payoff probabilities.
    Restricted(RestrictedArgs),
    /// Re-run the configuration embedded in an earlier output file.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Use the acceptance-scenario inputs and reject explicit model flags.
    #[arg(long)]
    pub defaults: bool,
}

#[derive(Debug, Args)]
pub struct CovarianceArgs {
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub hurst: Option<f64>,
    #[arg(long, conflicts_with = "defaults")]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MarketArgs {
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub hurst: Option<f64>,
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, conflicts_with = "defaults")]
    pub n: Option<usize>,
    /// Comma list or `start:end:geometric`.
    #[arg(long, conflicts_with = "defaults", value_parser = parse_grid)]
    pub alphas: Option<AlphaGrid>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SeparateArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[arg(long, conflicts_with = "defaults")]
    pub samples: Option<usize>,
    /// Ignored under `--defaults`, which always uses the acceptance seed.
    #[arg(long, env = "MFBM_SEED")]
    pub seed: Option<u64>,
    /// A number, `auto` (zero) or `midpoint`.
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub threshold: Option<Threshold>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RestrictedArgs {
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, conflicts_with = "defaults", value_parser = parse_grid)]
    pub alphas: Option<AlphaGrid>,
    #[arg(long, conflicts_with = "defaults")]
    pub samples: Option<usize>,
    /// Ignored under `--defaults`, which always uses the acceptance seed.
    #[arg(long, env = "MFBM_SEED")]
    pub seed: Option<u64>,
    #[arg(long, conflicts_with = "defaults", allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    pub file: PathBuf,
    /// Destination for the regenerated output; standard output when omitted.
    #[arg(long, conflicts_with = "check")]
    pub out: Option<PathBuf>,
    /// Compare the regenerated body with the file instead of writing it.
    #[arg(long)]
    pub check: bool,
}

const DEFAULT_SEED: u64 = 42;

/// Parsed `--alphas` value.
#[derive(Debug, Clone)]
pub struct AlphaGrid(pub Vec<f64>);

fn parse_grid(s: &str) -> Result<AlphaGrid, String> {
    parse_alphas(s).map(AlphaGrid)
}

fn doubling(lo: f64, hi: f64) -> Vec<f64> {
    parse_alphas(&format!("{lo}:{hi}:geometric")).expect("static grid")
}

fn out_string(o: &Output) -> Option<String> {
    o.out.as_ref().map(|p| p.display().to_string())
}

impl CovarianceArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            command: Command::Covariance,
            hurst: Some(self.hurst.unwrap_or(0.8)),
            mu: None,
            sigma: None,
            n: Some(self.n.unwrap_or(8)),
            alphas: None,
            samples: None,
            seed: None,
            threshold: None,
            delta: None,
            out: out_string(&self.output),
            format: self.output.format.unwrap_or(Format::Csv),
        }
    }
}

impl MarketArgs {
    fn fill(&self, config: &mut RunConfig, n: usize) {
        config.hurst = Some(self.hurst.unwrap_or(0.8));
        config.mu = Some(self.mu.unwrap_or(0.0));
        config.sigma = Some(self.sigma.unwrap_or(1.0));
        config.n = Some(self.n.unwrap_or(n));
        config.alphas = Some(self.alphas.clone().map(|g| g.0).unwrap_or_else(|| doubling(1.0, 32.0)));
    }
}

fn blank(command: Command, output: &Output, format: Format) -> RunConfig {
    RunConfig {
        command,
        hurst: None,
        mu: None,
        sigma: None,
        n: None,
        alphas: None,
        samples: None,
        seed: None,
        threshold: None,
        delta: None,
        out: out_string(output),
        format: output.format.unwrap_or(format),
    }
}

impl SweepArgs {
    pub fn config(&self) -> RunConfig {
        let mut c = blank(Command::EntropySweep, &self.output, Format::Csv);
        self.market.fill(&mut c, 8);
        c
    }
}

impl SeparateArgs {
    pub fn config(&self) -> RunConfig {
        let mut c = blank(Command::Separate, &self.output, Format::Json);
        self.market.fill(&mut c, 16);
        c.samples = Some(self.samples.unwrap_or(10_000));
        c.seed = Some(if self.output.defaults { DEFAULT_SEED } else { self.seed.unwrap_or(DEFAULT_SEED) });
        c.threshold = Some(self.threshold.unwrap_or(Threshold::Auto));
        c
    }
}

impl RestrictedArgs {
    pub fn config(&self) -> RunConfig {
        let mut c = blank(Command::Restricted, &self.output, Format::Csv);
        c.sigma = Some(self.sigma.unwrap_or(1.0));
        c.alphas = Some(self.alphas.clone().map(|g| g.0).unwrap_or_else(|| vec![10.0, 30.0, 100.0]));
        c.samples = Some(self.samples.unwrap_or(1_000_000));
        c.seed = Some(if self.output.defaults { DEFAULT_SEED } else { self.seed.unwrap_or(DEFAULT_SEED) });
        c.delta = Some(self.delta.unwrap_or(0.1));
        c
    }
}
