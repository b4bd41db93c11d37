//! Flag definitions.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "hlgf",
    version,
    about = "Green functions of hypercubic lattices at real frequency"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate G_r(ω) at one frequency.
    Eval(PointArgs),
    /// Evaluate G_r(ω) on a uniform frequency grid and write CSV.
    Sweep(PointArgs),
    /// Recompute the published reference values.
    Table(TableArgs),
    /// Evaluation counts and accuracy of the contour, naive and Levin methods.
    Bench(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Contour,
    Levin,
    Bz,
    Time,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Contour => "contour",
            Method::Levin => "levin",
            Method::Bz => "bz",
            Method::Time => "time",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Relative quadrature tolerance; the absolute tolerance is a tenth of it.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Split point T between the real-axis and rotated pieces.
    #[arg(long = "split-T", default_value_t = 3.0)]
    pub split_t: f64,
    #[arg(long)]
    pub json: bool,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Lattice dimension; inferred from --r or --omegas when omitted.
    #[arg(short = 'd')]
    pub dim: Option<usize>,
    /// Coupling amplitudes Ω_k (default 1 on every axis).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub omegas: Option<Vec<f64>>,
    /// Lattice vector (default the origin).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<i32>>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "omega_range")]
    pub omega: Option<f64>,
    /// MIN:MAX:STEPS, endpoints included.
    #[arg(long = "omega-range", allow_hyphen_values = true)]
    pub omega_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Contour)]
    pub method: Method,
    /// Imaginary shift for the Brillouin-zone sum.
    #[arg(long, default_value_t = 1e-3)]
    pub eta: f64,
    /// Cutoff of the truncated time integral.
    #[arg(long = "t-max", default_value_t = 1000.0)]
    pub t_max: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Multiply every coupling by 1 + δ (sensitivity check).
    #[arg(long = "perturb-omega", hide = true, default_value_t = 0.0)]
    pub perturb_omega: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}
