//! Plain CSV writers. Floats are written with 17 significant digits so every
//! `f64` survives a text round trip unchanged.

use crate::market::EntropyRow;
use crate::numerics::SymmetricMatrix;
use crate::restricted::RestrictedRow;
use crate::separation::SeparationRow;
use std::io::{self, Write};

pub const SWEEP_HEADER: &str = "alpha,n,H,mu,sigma,entropy_nats,lower_bound_nats,entropy_wiener_nats,theta_n,lambda_max,loglr_variance";
pub const SEPARATION_HEADER: &str = "alpha,threshold,p_mixed,p_mixed_se,p_drift,p_drift_se,samples";
pub const RESTRICTED_HEADER: &str = "alpha,e_s1,e_s1_se,up_prob,up_prob_se,down_prob,down_prob_se";

/// `v` with 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn join(fields: &[String]) -> String {
    fields.join(",")
}

/// A `# key=value` metadata line.
pub fn write_comment<W: Write>(w: &mut W, key: &str, value: &str) -> io::Result<()> {
    writeln!(w, "# {key}={value}")
}

pub fn write_matrix_csv<W: Write>(w: &mut W, m: &SymmetricMatrix) -> io::Result<()> {
    let n = m.dim();
    writeln!(w, "{}", join(&(0..n).map(|j| format!("col_{j}")).collect::<Vec<_>>()))?;
    for i in 0..n {
        writeln!(w, "{}", join(&m.row(i).iter().map(|&v| format_float(v)).collect::<Vec<_>>()))?;
    }
    Ok(())
}

pub fn write_entropy_sweep_csv<W: Write>(w: &mut W, rows: &[EntropyRow]) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        let fields = [
            format_float(r.alpha),
            r.n.to_string(),
            format_float(r.hurst),
            format_float(r.mu),
            format_float(r.sigma),
            format_float(r.entropy),
            r.lower_bound.map(format_float).unwrap_or_default(),
            format_float(r.entropy_wrt_wiener),
            format_float(r.theta_n),
            format_float(r.lambda_max),
            format_float(r.loglr_variance),
        ];
        writeln!(w, "{}", join(&fields))?;
    }
    Ok(())
}

pub fn write_separation_csv<W: Write>(w: &mut W, rows: &[SeparationRow]) -> io::Result<()> {
    writeln!(w, "{SEPARATION_HEADER}")?;
    for r in rows {
        let fields = [
            format_float(r.alpha),
            format_float(r.threshold),
            format_float(r.p_mixed.p),
            format_float(r.p_mixed.se),
            format_float(r.p_drift.p),
            format_float(r.p_drift.se),
            r.samples.to_string(),
        ];
        writeln!(w, "{}", join(&fields))?;
    }
    Ok(())
}

pub fn write_restricted_csv<W: Write>(w: &mut W, rows: &[RestrictedRow]) -> io::Result<()> {
    writeln!(w, "{RESTRICTED_HEADER}")?;
    for r in rows {
        let fields = [
            format_float(r.alpha),
            format_float(r.e_s1.value),
            format_float(r.e_s1.se),
            format_float(r.up_probability.p),
            format_float(r.up_probability.se),
            format_float(r.down_probability.p),
            format_float(r.down_probability.se),
        ];
        writeln!(w, "{}", join(&fields))?;
    }
    Ok(())
}
