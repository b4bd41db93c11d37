//! `hlgf` command-line frontend.
//!
//! Exit codes: 0 on success, 1 on numerical failure, 2 on usage errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod format;
pub mod methods;

use args::{Cli, Command, CommonArgs};
use clap::Parser;
use hlgf_core::{QuadConfig, RegimeParams};
use std::ffi::OsString;
use std::io::Write;
use thiserror::Error;

pub const MAX_EVALS_ENV: &str = "HLGF_MAX_EVALS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<hlgf_core::ContourError> for CliError {
    fn from(e: hlgf_core::ContourError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<hlgf_core::OracleError> for CliError {
    fn from(e: hlgf_core::OracleError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<hlgf_core::LevinError> for CliError {
    fn from(e: hlgf_core::LevinError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Split-point and quadrature settings derived from the shared flags and
/// `HLGF_MAX_EVALS`.
pub fn solver_settings(common: &CommonArgs) -> Result<(RegimeParams, QuadConfig), CliError> {
    if !(common.tol > 0.0 && common.tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {}", common.tol)));
    }
    if !(common.split_t > 0.0 && common.split_t.is_finite()) {
        return Err(CliError::Usage(format!(
            "--split-T must be positive, got {}",
            common.split_t
        )));
    }
    let mut quad = QuadConfig::with_tolerances(common.tol / 10.0, common.tol);
    if let Some(cap) = max_evals_from_env()? {
        quad.max_evals = cap;
    }
    let params = RegimeParams {
        split_t: common.split_t,
        ..Default::default()
    };
    Ok((params, quad))
}

pub fn max_evals_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(MAX_EVALS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{MAX_EVALS_ENV} must be a positive integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn emit(text: &str, common: &CommonArgs) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parse `args`, run the subcommand and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (result, common) = match &cli.command {
        Command::Eval(a) => (commands::eval(a), &a.common),
        Command::Sweep(a) => (commands::sweep(a), &a.common),
        Command::Table(a) => (commands::table(a), &a.common),
        Command::Bench(a) => (commands::bench(a), a),
    };
    let outcome = result.and_then(|report| {
        emit(&report.text, common)?;
        report.status
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Rendered output plus the status to exit with once it has been written.
pub struct Report {
    pub text: String,
    pub status: Result<(), CliError>,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Report { text, status: Ok(()) }
    }
}
