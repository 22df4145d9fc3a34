//! `mfbm`: file-producing experiments for mixed fractional Black-Scholes markets.
//!
//! Exit status is 0 on success, 2 when the configuration is rejected and 1
//! on numerical or i/o failure.

mod args;
mod config;
mod run;

use clap::Parser;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use args::{Cli, Cmd};
use run::{canonical_body, embedded_config, run, write_output, RunError};

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    let (config, out) = match cli.command {
        Cmd::Covariance(a) => (a.config(), a.output.out),
        Cmd::EntropySweep(a) => (a.config(), a.output.out),
        Cmd::Separate(a) => (a.config(), a.output.out),
        Cmd::Restricted(a) => (a.config(), a.output.out),
        Cmd::Rerun(a) => {
            let text = std::fs::read_to_string(&a.file)?;
            let config = embedded_config(&text)?;
            if a.check {
                let fresh = run(&config, None)?;
                if fresh != canonical_body(&text).into_bytes() {
                    return Err(RunError::NotReproduced(a.file.display().to_string()));
                }
                println!("reproduced {}", a.file.display());
                return Ok(());
            }
            (config, a.out)
        }
    };
    let bytes = run(&config, Some(now()))?;
    write_output(&bytes, out.as_deref())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
