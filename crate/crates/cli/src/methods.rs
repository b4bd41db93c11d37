//! Evaluation of one query by any of the four methods.

use crate::args::Method;
use crate::CliError;
use hlgf_core::{
    build_bessel_basis, bz_green, classify, green, green_inband, integrand_f1, integrate_finite, levin_integrate,
    time_green, BZOracleConfig, Complex64, GreenQuery, QuadConfig, Regime, RegimeParams,
};

/// Levin panels cover `[LEVIN_START, LEVIN_END]`; the head is done by
/// quadrature and the tail by the rotated contour integral.
pub const LEVIN_START: f64 = 10.0;
pub const LEVIN_END: f64 = 100.0;
pub const LEVIN_PANELS: usize = 1;
pub const LEVIN_NODES: usize = 40;

/// Grid refinement stops once successive BZ values differ by less than this.
pub const BZ_GRID_TOL: f64 = 1e-7;
pub const BZ_FIRST_GRID: usize = 256;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub method: Method,
    pub params: RegimeParams,
    pub quad: QuadConfig,
    pub eta: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub value: Complex64,
    /// Regime of `ω` itself, whatever the method.
    pub regime: Regime,
    pub evals: usize,
    pub err: f64,
}

pub fn evaluate(q: &GreenQuery, s: &Settings) -> Result<Point, CliError> {
    let regime = classify(q, &s.params);
    let (value, evals, err) = match s.method {
        Method::Contour => {
            let g = green(q, &s.params, &s.quad)?;
            (g.value, g.evals, g.err_estimate)
        }
        Method::Bz => bz(q, s)?,
        Method::Time => {
            let t = time_green(q, s.t_max, &s.quad)?;
            (t.value, t.evals, t.quad_err + t.tail_bound)
        }
        Method::Levin => levin(q, regime, s)?,
    };
    Ok(Point {
        value,
        regime,
        evals,
        err,
    })
}

/// Doubles the grid until two successive values agree to [`BZ_GRID_TOL`] or
/// the point budget is reached; `err` is the last difference.
fn bz(q: &GreenQuery, s: &Settings) -> Result<(Complex64, usize, f64), CliError> {
    let mut cfg = BZOracleConfig {
        eta: s.eta,
        grid_n: BZ_FIRST_GRID,
        ..Default::default()
    };
    let points = |n: usize| (n as u128).pow(q.dim() as u32 - 1);
    let mut value = bz_green(q, &cfg)?;
    let mut evals = points(cfg.grid_n);
    let mut diff = f64::INFINITY;
    while diff >= BZ_GRID_TOL && points(2 * cfg.grid_n) <= cfg.max_points {
        cfg.grid_n *= 2;
        let next = bz_green(q, &cfg)?;
        diff = (next - value).norm();
        value = next;
        evals += points(cfg.grid_n);
    }
    let factor = if cfg.richardson { 2 } else { 1 };
    Ok((value, factor * evals as usize, diff))
}

/// Quadrature on `[0, LEVIN_START]`, Levin collocation on equal panels up to
/// `LEVIN_END`, rotated contour tail beyond. Only generic in-band
/// frequencies are supported: the collocation system resonates at van Hove
/// frequencies.
fn levin(q: &GreenQuery, regime: Regime, s: &Settings) -> Result<(Complex64, usize, f64), CliError> {
    if regime != Regime::Generic {
        return Err(CliError::Numerical(format!(
            "levin method is not supported for {regime} frequencies (ω = {})",
            q.omega
        )));
    }
    let mut f1_err = None;
    let head = integrate_finite(
        |t| match integrand_f1(q, t) {
            Ok(v) => v,
            Err(e) => {
                f1_err.get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        },
        0.0,
        LEVIN_START,
        &s.quad,
    );
    if let Some(e) = f1_err {
        return Err(e.into());
    }
    let head = head.map_err(|e| CliError::Numerical(e.to_string()))?;
    let width = (LEVIN_END - LEVIN_START) / LEVIN_PANELS as f64;
    let mut body = Complex64::new(0.0, 0.0);
    let mut body_err = 0.0;
    for i in 0..LEVIN_PANELS {
        let a = LEVIN_START + i as f64 * width;
        let problem = build_bessel_basis(q, a, a + width)?;
        let fine = levin_integrate(&problem, LEVIN_NODES)?;
        let coarse = levin_integrate(&problem, LEVIN_NODES - 10)?;
        body += fine;
        body_err += (fine - coarse).norm();
    }
    let tail_params = RegimeParams {
        split_t: LEVIN_END,
        ..s.params
    };
    let tail = green_inband(q, &tail_params, &s.quad)?.g2;
    let value = head.value + body + tail.value;
    let evals = head.evals + tail.evals;
    Ok((value, evals, head.err_estimate + body_err + tail.err_estimate))
}
