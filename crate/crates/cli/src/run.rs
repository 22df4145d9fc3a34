//! Executes a [`RunConfig`] and renders the result as CSV or JSON.

use serde_json::{json, Value};
use std::io::Write;

use mfbm_core::export::{
    format_float, write_comment, write_entropy_sweep_csv, write_matrix_csv, write_restricted_csv,
    write_separation_csv,
};
use mfbm_core::fbm::fbm_increment_covariance;
use mfbm_core::market::{entropy_sweep, EntropyRow, MarketParams};
use mfbm_core::numerics::{symmetric_eigenvalues, SeededStream, SymmetricMatrix};
use mfbm_core::restricted::{restricted_market_report, RestrictedConfig, RestrictedReport};
use mfbm_core::separation::{saa_experiment, SeparationConfig, SeparationReport};

use crate::config::{Command, Format, RunConfig};

/// Key (JSON) or comment key (CSV) of the wall-clock field. It is the only
/// part of an artifact that is not reproducible.
pub const TIMESTAMP_KEY: &str = "generated_unix_seconds";
pub const CONFIG_KEY: &str = "config";

/// Stream tag of the separation experiment; the restricted market uses its own.
const SEPARATE_TAG: u64 = 0x5e9a;
const RESTRICTED_TAG: u64 = 0x7e57;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] mfbm_core::Error),
    #[error("missing configuration field `{0}`")]
    MissingField(&'static str),
    #[error("{0}")]
    BadArtifact(String),
    #[error("regenerated output differs from `{0}`")]
    NotReproduced(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn name(&self) -> &'static str {
        match self {
            RunError::Core(e) => e.name(),
            RunError::MissingField(_) => "MissingField",
            RunError::BadArtifact(_) => "BadArtifact",
            RunError::NotReproduced(_) => "NotReproduced",
            RunError::Io(_) => "IoError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(e) if e.is_validation() => 2,
            RunError::MissingField(_) | RunError::BadArtifact(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, RunError>;

fn need<T: Clone>(v: &Option<T>, name: &'static str) -> Result<T> {
    v.clone().ok_or(RunError::MissingField(name))
}

struct CovarianceResult {
    matrix: SymmetricMatrix,
    trace: f64,
    total_sum: f64,
    lambda_min: f64,
    lambda_max: f64,
}

enum Outcome {
    Covariance(CovarianceResult),
    Sweep(Vec<EntropyRow>),
    Separate(SeparationReport),
    Restricted(RestrictedReport),
}

fn market(c: &RunConfig) -> Result<MarketParams> {
    Ok(MarketParams::new(need(&c.hurst, "hurst")?, need(&c.mu, "mu")?, need(&c.sigma, "sigma")?)?)
}

fn execute(c: &RunConfig) -> Result<Outcome> {
    Ok(match c.command {
        Command::Covariance => {
            let cov = fbm_increment_covariance(need(&c.hurst, "hurst")?, need(&c.n, "n")?)?;
            let eig = symmetric_eigenvalues(&cov.matrix)?;
            Outcome::Covariance(CovarianceResult {
                trace: cov.trace(),
                total_sum: cov.matrix.total_sum(),
                lambda_min: eig[0],
                lambda_max: eig[eig.len() - 1],
                matrix: cov.matrix,
            })
        }
        Command::EntropySweep => {
            Outcome::Sweep(entropy_sweep(&market(c)?, need(&c.n, "n")?, &need(&c.alphas, "alphas")?)?)
        }
        Command::Separate => {
            let config = SeparationConfig {
                threshold: need(&c.threshold, "threshold")?.policy(),
                ..SeparationConfig::default()
            };
            let stream = SeededStream::new(need(&c.seed, "seed")?, SEPARATE_TAG);
            Outcome::Separate(saa_experiment(
                &market(c)?,
                need(&c.n, "n")?,
                &need(&c.alphas, "alphas")?,
                need(&c.samples, "samples")?,
                &stream,
                &config,
            )?)
        }
        Command::Restricted => {
            let config = RestrictedConfig {
                sigma: need(&c.sigma, "sigma")?,
                alphas: need(&c.alphas, "alphas")?,
                delta: need(&c.delta, "delta")?,
                count: need(&c.samples, "samples")?,
            };
            let stream = SeededStream::new(need(&c.seed, "seed")?, RESTRICTED_TAG);
            Outcome::Restricted(restricted_market_report(&config, &stream)?)
        }
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

fn result_json(outcome: &Outcome) -> Value {
    match outcome {
        Outcome::Covariance(r) => {
            let n = r.matrix.dim();
            let rows: Vec<&[f64]> = (0..n).map(|i| r.matrix.row(i)).collect();
            json!({
                "matrix": rows,
                "trace": r.trace,
                "total_sum": r.total_sum,
                "lambda_min": r.lambda_min,
                "lambda_max": r.lambda_max,
            })
        }
        Outcome::Sweep(rows) => json!({ "rows": to_value(rows) }),
        Outcome::Separate(report) => to_value(report),
        Outcome::Restricted(report) => to_value(report),
    }
}

fn render_csv(config: &RunConfig, outcome: &Outcome, timestamp: Option<u64>) -> Result<Vec<u8>> {
    let mut w = Vec::new();
    write_comment(&mut w, CONFIG_KEY, &config.to_json_line())?;
    if let Some(t) = timestamp {
        write_comment(&mut w, TIMESTAMP_KEY, &t.to_string())?;
    }
    match outcome {
        Outcome::Covariance(r) => {
            for (k, v) in [
                ("trace", r.trace),
                ("total_sum", r.total_sum),
                ("lambda_min", r.lambda_min),
                ("lambda_max", r.lambda_max),
            ] {
                write_comment(&mut w, k, &format_float(v))?;
            }
            write_matrix_csv(&mut w, &r.matrix)?;
        }
        Outcome::Sweep(rows) => write_entropy_sweep_csv(&mut w, rows)?,
        Outcome::Separate(report) => {
            write_comment(&mut w, "verdict", &format!("{:?}", report.verdict.verdict))?;
            write_comment(&mut w, "saa_conclusion", report.saa_conclusion.as_str())?;
            write_separation_csv(&mut w, &report.rows)?;
        }
        Outcome::Restricted(report) => {
            write_comment(&mut w, "tilt_mass", &format_float(report.tilt_mass))?;
            write_comment(&mut w, "tilt_first_moment", &format_float(report.tilt_first_moment))?;
            write_comment(&mut w, "min_ln_tilt_weight", &format_float(report.min_ln_tilt_weight))?;
            write_restricted_csv(&mut w, &report.rows)?;
        }
    }
    Ok(w)
}

fn render_json(config: &RunConfig, outcome: &Outcome, timestamp: Option<u64>) -> Vec<u8> {
    let mut doc = json!({ CONFIG_KEY: to_value(config), "result": result_json(outcome) });
    if let Some(t) = timestamp {
        doc[TIMESTAMP_KEY] = json!(t);
    }
    let mut out = serde_json::to_vec_pretty(&doc).expect("json renders");
    out.push(b'\n');
    out
}

/// Runs `config` and renders its artifact. `timestamp` is omitted from the
/// output when `None`, which yields the canonical body directly.
pub fn run(config: &RunConfig, timestamp: Option<u64>) -> Result<Vec<u8>> {
    let outcome = execute(config)?;
    match config.format {
        Format::Csv => render_csv(config, &outcome, timestamp),
        Format::Json => Ok(render_json(config, &outcome, timestamp)),
    }
}

/// Recovers the configuration embedded in a CSV or JSON artifact.
pub fn embedded_config(text: &str) -> Result<RunConfig> {
    let bad = |e: serde_json::Error| RunError::BadArtifact(format!("unreadable configuration: {e}"));
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(bad)?;
        let config = doc
            .get(CONFIG_KEY)
            .ok_or_else(|| RunError::BadArtifact("no `config` key".into()))?;
        return serde_json::from_value(config.clone()).map_err(bad);
    }
    let prefix = format!("# {CONFIG_KEY}=");
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .ok_or_else(|| RunError::BadArtifact("no `# config=` line".into()))?;
    serde_json::from_str(line).map_err(bad)
}

/// The artifact with its timestamp line removed. Works on the text directly
/// so the remaining bytes are untouched.
pub fn canonical_body(text: &str) -> String {
    let csv = format!("# {TIMESTAMP_KEY}=");
    let json = format!("  \"{TIMESTAMP_KEY}\": ");
    text.lines()
        .filter(|l| !l.starts_with(&csv) && !l.starts_with(&json))
        .map(|l| format!("{l}\n"))
        .collect()
}

pub fn write_output(bytes: &[u8], out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Threshold;

    fn covariance(hurst: f64, n: usize, format: Format) -> RunConfig {
        RunConfig {
            command: Command::Covariance,
            hurst: Some(hurst),
            mu: None,
            sigma: None,
            n: Some(n),
            alphas: None,
            samples: None,
            seed: None,
            threshold: None,
            delta: None,
            out: None,
            format,
        }
    }

    #[test]
    fn canonical_body_drops_only_the_timestamp() {
        for format in [Format::Csv, Format::Json] {
            let c = covariance(0.8, 3, format);
            let stamped = String::from_utf8(run(&c, Some(1_700_000_000)).unwrap()).unwrap();
            let bare = String::from_utf8(run(&c, None).unwrap()).unwrap();
            assert_ne!(stamped, bare);
            assert_eq!(canonical_body(&stamped), bare);
            assert_eq!(embedded_config(&stamped).unwrap(), c);
        }
    }

    #[test]
    fn missing_fields_are_validation_errors() {
        let mut c = covariance(0.8, 2, Format::Csv);
        c.n = None;
        let err = run(&c, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(err.name(), "MissingField");
    }

    #[test]
    fn midpoint_threshold_is_resolved_per_row() {
        let c = RunConfig {
            command: Command::Separate,
            hurst: Some(0.8),
            mu: Some(0.0),
            sigma: Some(1.0),
            n: Some(4),
            alphas: Some(vec![1.0, 2.0, 4.0]),
            samples: Some(200),
            seed: Some(1),
            threshold: Some(Threshold::Midpoint),
            delta: None,
            out: None,
            format: Format::Json,
        };
        let doc: Value = serde_json::from_slice(&run(&c, None).unwrap()).unwrap();
        let rows = doc["result"]["rows"].as_array().unwrap();
        assert!(rows.iter().all(|r| r["threshold"].as_f64().unwrap() != 0.0));
    }
}
