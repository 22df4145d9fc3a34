//! Run configuration shared by all commands and echoed into every artifact.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use mfbm_core::separation::ThresholdPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Covariance,
    EntropySweep,
    Separate,
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to reproduce one invocation. Fields a command does not
/// use are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub hurst: Option<f64>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub n: Option<usize>,
    pub alphas: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub threshold: Option<Threshold>,
    pub delta: Option<f64>,
    pub out: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&serde_json::to_value(self).expect("config serializes"))
            .expect("config serializes")
    }
}

/// `--threshold`: a number, `auto` (zero) or `midpoint`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Auto,
    Midpoint,
    Value(f64),
}

impl Threshold {
    pub fn policy(self) -> ThresholdPolicy {
        match self {
            Threshold::Auto => ThresholdPolicy::Fixed(0.0),
            Threshold::Midpoint => ThresholdPolicy::Midpoint,
            Threshold::Value(c) => ThresholdPolicy::Fixed(c),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "auto" => Ok(Threshold::Auto),
            "midpoint" => Ok(Threshold::Midpoint),
            other => match other.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Threshold::Value(v)),
                _ => Err(format!("expected a finite number, `auto` or `midpoint`, got `{s}`")),
            },
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Auto => f.write_str("auto"),
            Threshold::Midpoint => f.write_str("midpoint"),
            Threshold::Value(v) => write!(f, "{v:?}"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `--alphas`: either a comma list or `a:b:geometric`, which doubles
/// from `a` while not exceeding `b`.
pub fn parse_alphas(s: &str) -> Result<Vec<f64>, String> {
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    if let Some((range, kind)) = s.rsplit_once(':') {
        if kind.trim() != "geometric" {
            return Err(format!("unknown grid kind `{kind}`, expected `geometric`"));
        }
        let (lo, hi) = range
            .split_once(':')
            .ok_or_else(|| "expected `start:end:geometric`".to_string())?;
        let (lo, hi) = (number(lo)?, number(hi)?);
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(format!("geometric grid needs 0 < start <= end, got {lo}:{hi}"));
        }
        let mut out = Vec::new();
        let mut a = lo;
        while a <= hi * (1.0 + 1e-12) {
            out.push(a);
            a *= 2.0;
        }
        return Ok(out);
    }
    s.split(',').map(number).collect()
}
