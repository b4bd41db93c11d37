//! Independent evaluators used to cross-check the contour method.
//!
//! * [`bz_green`]: the Brillouin-zone integral
//!   `G_r(ω) = (2π)^{-d} ∫ e^{iq·r} / (ω + Σ Ω_k cos q_k + iη) d^d q`
//!   on a uniform periodic grid, optionally extrapolated to `η → 0`.
//! * [`time_green`]: the oscillatory time integral truncated at `t_max`.
//! * [`helmholtz_residual`]: the lattice difference equation
//!   `ω G_r + ½ Σ_k Ω_k (G_{r+e_k} + G_{r-e_k}) = δ_{r0}`.

use crate::contour::{integrand_f1, ContourError, GreenQuery};
use crate::quadrature::{integrate_finite, QuadConfig, QuadError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid of {points} points exceeds the budget of {budget}")]
    Budget { points: u128, budget: u128 },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("time-domain quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Contour(#[from] ContourError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BZOracleConfig {
    /// Imaginary part added to `ω`. Zero is accepted only outside the band.
    pub eta: f64,
    /// Grid points per summed dimension.
    pub grid_n: usize,
    /// Combine `η` and `η/2` as `2G(η/2) - G(η)`.
    pub richardson: bool,
    /// Integrate the first axis in closed form and sum only the others.
    pub analytic_axis: bool,
    /// Largest number of grid points per `η` value.
    pub max_points: u128,
}

impl Default for BZOracleConfig {
    fn default() -> Self {
        BZOracleConfig {
            eta: 1e-3,
            grid_n: 64,
            richardson: true,
            analytic_axis: true,
            max_points: 200_000_000,
        }
    }
}

/// `(1/2π) ∫_0^{2π} e^{iqr} / (z + Ω cos q) dq = (-ρ)^{|r|} / s`, where
/// `s = ±√(z² - Ω²)` and `ρ = (z - s)/Ω` with the sign chosen so `|ρ| < 1`.
fn axis_integral(z: Complex64, big_omega: f64, r: u32) -> Complex64 {
    let mut s = (z * z - big_omega * big_omega).sqrt();
    let mut rho = (z - s) / big_omega;
    if rho.norm() > 1.0 {
        s = -s;
        rho = (z - s) / big_omega;
    }
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * rho.powu(r) / s
}

/// One grid evaluation at a fixed shift `eta`.
fn bz_sum(query: &GreenQuery, eta: f64, cfg: &BZOracleConfig) -> Result<Complex64> {
    let d = query.dim();
    let omegas = query.model.omegas();
    let r = &query.r;
    let n = cfg.grid_n;
    let first = usize::from(cfg.analytic_axis);
    let summed = d - first;
    let points = (n as u128).pow(summed as u32);
    if points > cfg.max_points {
        return Err(OracleError::Budget {
            points,
            budget: cfg.max_points,
        });
    }
    let h = 2.0 * PI / n as f64;
    let cos: Vec<f64> = (0..n).map(|j| (j as f64 * h).cos()).collect();
    let z0 = Complex64::new(query.omega, eta);
    let mut idx = vec![0usize; summed];
    let mut total = Complex64::new(0.0, 0.0);
    for _ in 0..points {
        let mut shift = 0.0;
        let mut phase = 0.0;
        for (slot, &j) in idx.iter().enumerate() {
            let k = slot + first;
            shift += omegas[k] * cos[j];
            // index arithmetic keeps the phase argument in [0, 2π)
            phase += ((j as i64 * r[k] as i64).rem_euclid(n as i64)) as f64 * h;
        }
        let z = z0 + shift;
        let term = if cfg.analytic_axis {
            axis_integral(z, omegas[0], r[0].unsigned_abs())
        } else {
            z.inv()
        };
        total += term * Complex64::from_polar(1.0, phase);
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    Ok(total / points as f64)
}

/// Brillouin-zone integral on a `grid_n`-point periodic trapezoid grid.
pub fn bz_green(query: &GreenQuery, cfg: &BZOracleConfig) -> Result<Complex64> {
    if cfg.grid_n < 8 {
        return Err(OracleError::InvalidConfig(format!("grid_n = {} < 8", cfg.grid_n)));
    }
    let outside = query.omega.abs() > query.model.bandwidth();
    if !(cfg.eta >= 1e-8 || (cfg.eta == 0.0 && outside)) {
        return Err(OracleError::InvalidConfig(format!(
            "eta = {} (zero is only allowed outside the band)",
            cfg.eta
        )));
    }
    let g = bz_sum(query, cfg.eta, cfg)?;
    if cfg.richardson && cfg.eta > 0.0 {
        let g_half = bz_sum(query, 0.5 * cfg.eta, cfg)?;
        Ok(2.0 * g_half - g)
    } else {
        Ok(g)
    }
}

/// Refine [`bz_green`] by doubling `grid_n` until successive values differ by
/// less than `tol`. Returns the last value and the grid it used.
pub fn bz_green_converged(query: &GreenQuery, cfg: &BZOracleConfig, tol: f64) -> Result<(Complex64, usize)> {
    let mut c = *cfg;
    let mut prev = bz_green(query, &c)?;
    loop {
        c.grid_n *= 2;
        let next = bz_green(query, &c)?;
        if (next - prev).norm() < tol {
            return Ok((next, c.grid_n));
        }
        prev = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGreen {
    pub value: Complex64,
    /// Estimate of `|∫_{t_max}^∞ f_1|` from the `t^{-d/2}` envelope; infinite
    /// for `d <= 2`.
    pub tail_bound: f64,
    pub quad_err: f64,
    pub evals: usize,
    /// False when the evaluation budget ran out; `value` is then the best
    /// estimate reached.
    pub converged: bool,
}

/// `∫_0^{t_max} f_1(t) dt` by adaptive quadrature.
pub fn time_green(query: &GreenQuery, t_max: f64, cfg: &QuadConfig) -> Result<TimeGreen> {
    if !(t_max > 0.0 && t_max < 1e6) {
        return Err(OracleError::InvalidConfig(format!("t_max = {t_max}")));
    }
    let mut failure = None;
    let res = integrate_finite(
        |t| match integrand_f1(query, t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        },
        0.0,
        t_max,
        cfg,
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    let (best, converged) = match res {
        Ok(r) => (r, true),
        Err(QuadError::MaxEvals { best, .. }) => (best, false),
        Err(e) => return Err(e.into()),
    };
    let d = query.dim() as f64;
    // |J_r(x)| <= √(2/(πx)) asymptotically, so |f_1| ~ C t^{-d/2}.
    let c: f64 = query.model.omegas().iter().map(|w| (2.0 / (PI * w)).sqrt()).product();
    let tail_bound = if d > 2.0 {
        c * t_max.powf(1.0 - 0.5 * d) / (0.5 * d - 1.0)
    } else {
        f64::INFINITY
    };
    Ok(TimeGreen {
        value: best.value,
        tail_bound,
        quad_err: best.err_estimate,
        evals: best.evals,
        converged,
    })
}

/// `ω G_r + ½ Σ_k Ω_k (G_{r+e_k} + G_{r-e_k}) - δ_{r0}` with `G` supplied by
/// `evaluator`.
pub fn helmholtz_residual<F, E>(mut evaluator: F, query: &GreenQuery) -> std::result::Result<Complex64, E>
where
    F: FnMut(&GreenQuery) -> std::result::Result<Complex64, E>,
{
    let mut acc = query.omega * evaluator(query)?;
    for (k, w) in query.model.omegas().iter().enumerate() {
        for step in [1, -1] {
            let mut neighbour = query.clone();
            neighbour.r[k] += step;
            acc += 0.5 * w * evaluator(&neighbour)?;
        }
    }
    if query.r.iter().all(|&x| x == 0) {
        acc -= 1.0;
    }
    Ok(acc)
}
