//! Lattice Green function by contour deformation.
//!
//! For a hypercubic lattice with axis couplings `Ω_k`,
//!
//! ```text
//! G_r(ω) = i^α ∫_0^∞ e^{iωt} Π_k J_{r_k}(Ω_k t) dt,    α = Σ|r_k| - 1.
//! ```
//!
//! The integral is split at `t = T`. The piece on `[0, T]` is done directly.
//! Beyond `T` every Bessel factor is written as `(H^+ + H^-)/2`, and each of the
//! `2^d` Hankel products is rotated onto the vertical ray `T ± iτ` selected by
//! the sign of `Λ[σ] = ω + Σ σ_k Ω_k`. There it decays like `e^{-|Λ|τ}`.
//!
//! Four frequency regimes are distinguished (see [`classify`]):
//!
//! * outside the band, the whole integral is rotated onto the imaginary axis
//!   and becomes a real integral of modified Bessel functions;
//! * generic in-band frequencies use the split above;
//! * close to a van Hove frequency `ω_c = Σ ±Ω_k`, some `|Λ|` is tiny and
//!   exponentially scaled Hankel functions keep the integrand finite;
//! * at `ω_c` the rotated integrand only decays like `τ^{-d/2}`, and the tail
//!   `τ > η` is folded onto a finite interval by `τ = u^{2/(2-d)}` (d ≥ 3).

use crate::quadrature::{integrate_finite, integrate_ray, QuadConfig, QuadError, QuadResult};
use crate::specfun::{bessel_i_scaled, bessel_j, hankel_scaled_upto, SpecfunError, MAX_ORDER};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::fmt;
use thiserror::Error;

/// Tolerance used when deduplicating van Hove frequencies.
const VAN_HOVE_DEDUP_TOL: f64 = 1e-12;

/// Above this `|Im G|`, an outside-band value is reported as inconsistent
/// instead of having its imaginary part discarded.
const REALITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("invalid lattice model: {0}")]
    InvalidModel(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("G diverges at the van Hove frequency ω = {omega} in d = {d}")]
    Divergent { d: usize, omega: f64 },
    #[error("folding the van Hove tail requires d >= 3, got d = {d}")]
    UnsupportedFold { d: usize },
    #[error("{operation} does not handle the {regime} regime")]
    WrongRegime { operation: &'static str, regime: Regime },
    #[error("unscaled Hankel products overflow at τ = {tau}; retry with scaled Hankel functions")]
    Overflow { tau: f64 },
    #[error("quadrature failed in {piece}: {source}")]
    Quadrature {
        piece: Piece,
        #[source]
        source: QuadError,
    },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

pub type Result<T> = std::result::Result<T, ContourError>;

/// Which integral a quadrature failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Piece {
    /// `∫_0^T f_1`
    G1,
    /// `∫_0^∞ f_4` (or its folded form)
    G2,
    /// the modified-Bessel integral used outside the band
    Outside,
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Piece::G1 => "g1",
            Piece::G2 => "g2",
            Piece::Outside => "outside-band integral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeModel {
    omegas: Vec<f64>,
    bandwidth: f64,
}

impl LatticeModel {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(ContourError::InvalidModel("dimension must be at least 1".into()));
        }
        if let Some(bad) = omegas.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(ContourError::InvalidModel(format!(
                "couplings must be positive and finite, got {bad}"
            )));
        }
        let bandwidth = omegas.iter().sum();
        Ok(LatticeModel { omegas, bandwidth })
    }

    /// `d` axes, all with coupling `omega`.
    pub fn isotropic(d: usize, omega: f64) -> Result<Self> {
        Self::new(vec![omega; d])
    }

    pub fn dim(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Band edge `W = Σ Ω_k`.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenQuery {
    pub model: LatticeModel,
    pub r: Vec<i32>,
    pub omega: f64,
}

impl GreenQuery {
    pub fn new(model: LatticeModel, r: Vec<i32>, omega: f64) -> Result<Self> {
        if r.len() != model.dim() {
            return Err(ContourError::InvalidQuery(format!(
                "lattice vector has {} components but the model has d = {}",
                r.len(),
                model.dim()
            )));
        }
        if !omega.is_finite() {
            return Err(ContourError::InvalidQuery(format!("ω = {omega}")));
        }
        if let Some(big) = r.iter().find(|x| x.unsigned_abs() > MAX_ORDER) {
            return Err(ContourError::Specfun(SpecfunError::UnsupportedOrder {
                order: big.unsigned_abs(),
                cap: MAX_ORDER,
            }));
        }
        Ok(GreenQuery { model, r, omega })
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// `α = Σ|r_k| - 1`.
    pub fn alpha(&self) -> i64 {
        self.r.iter().map(|x| x.unsigned_abs() as i64).sum::<i64>() - 1
    }

    /// The same query with axes sorted by `(Ω_k, |r_k|)` and `r_k >= 0`.
    /// `G` is invariant under both operations.
    pub fn canonical(&self) -> GreenQuery {
        let mut axes: Vec<(f64, i32)> = self
            .model
            .omegas()
            .iter()
            .zip(&self.r)
            .map(|(w, r)| (*w, r.abs()))
            .collect();
        axes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let model = LatticeModel::new(axes.iter().map(|a| a.0).collect()).expect("already validated");
        GreenQuery {
            model,
            r: axes.iter().map(|a| a.1).collect(),
            omega: self.omega,
        }
    }

    fn with_omega(&self, omega: f64) -> GreenQuery {
        GreenQuery { omega, ..self.clone() }
    }
}

/// One Ising configuration `σ` and its net rate `Λ = ω + Σ σ_k Ω_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignConfig {
    pub sigma: Vec<i8>,
    pub lambda: f64,
}

impl SignConfig {
    /// Configuration number `bits`: bit `k` set means `σ_k = -1`.
    pub fn from_bits(bits: usize, omega: f64, omegas: &[f64]) -> Self {
        let sigma: Vec<i8> = (0..omegas.len())
            .map(|k| if bits >> k & 1 == 1 { -1 } else { 1 })
            .collect();
        let lambda = omega + sigma.iter().zip(omegas).map(|(s, w)| *s as f64 * w).sum::<f64>();
        SignConfig { sigma, lambda }
    }

    /// All `2^d` configurations in bit order.
    pub fn all(omega: f64, omegas: &[f64]) -> Vec<SignConfig> {
        (0..1usize << omegas.len())
            .map(|bits| SignConfig::from_bits(bits, omega, omegas))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub split_t: f64,
    pub vh_tol: f64,
    pub near_vh_window: f64,
    pub fold_eta: f64,
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams {
            split_t: 3.0,
            vh_tol: 1e-12,
            near_vh_window: 1e-4,
            fold_eta: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    OutsideBand,
    Generic,
    AtVanHove,
    NearVanHove,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::OutsideBand => "outside_band",
            Regime::Generic => "generic",
            Regime::AtVanHove => "at_van_hove",
            Regime::NearVanHove => "near_van_hove",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "outside_band" => Ok(Regime::OutsideBand),
            "generic" => Ok(Regime::Generic),
            "at_van_hove" => Ok(Regime::AtVanHove),
            "near_van_hove" => Ok(Regime::NearVanHove),
            other => Err(format!("unknown regime {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: Complex64,
    pub regime: Regime,
    pub evals: usize,
    pub err_estimate: f64,
    /// `∫_0^T f_1`, absent outside the band.
    pub g1: Option<QuadResult>,
    /// The rotated (or, outside the band, the modified-Bessel) integral.
    pub g2: QuadResult,
}

/// Distinct values of `Σ ±Ω_k`, ascending.
pub fn van_hove_frequencies(model: &LatticeModel) -> Vec<f64> {
    let mut all: Vec<f64> = SignConfig::all(0.0, model.omegas())
        .into_iter()
        .map(|s| s.lambda)
        .collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for v in all {
        match out.last() {
            Some(last) if (v - last).abs() <= VAN_HOVE_DEDUP_TOL => {}
            _ => out.push(v),
        }
    }
    out
}

/// Nearest van Hove frequency and its distance from `omega`.
pub fn nearest_van_hove(model: &LatticeModel, omega: f64) -> (f64, f64) {
    van_hove_frequencies(model)
        .into_iter()
        .map(|w| (w, (omega - w).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("a model has at least two van Hove frequencies")
}

pub fn classify(query: &GreenQuery, params: &RegimeParams) -> Regime {
    if query.omega.abs() > query.model.bandwidth() {
        return Regime::OutsideBand;
    }
    let (_, dist) = nearest_van_hove(&query.model, query.omega);
    if dist <= params.vh_tol {
        Regime::AtVanHove
    } else if dist <= params.near_vh_window {
        Regime::NearVanHove
    } else {
        Regime::Generic
    }
}

/// `i^n` for any integer `n`.
fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `f_1(t) = i^α e^{iωt} Π J_{r_k}(Ω_k t)`.
pub fn integrand_f1(query: &GreenQuery, t: f64) -> Result<Complex64> {
    let mut prod = 1.0;
    for (r, w) in query.r.iter().zip(query.model.omegas()) {
        prod *= bessel_j(r.unsigned_abs(), w * t)?;
    }
    Ok(i_pow(query.alpha()) * Complex64::from_polar(prod, query.omega * t))
}

/// Everything about a query that `f_4` needs, computed once.
struct Rotated {
    orders: Vec<u32>,
    omegas: Vec<f64>,
    omega: f64,
    split_t: f64,
    configs: Vec<SignConfig>,
    /// `i^{α+1} / 2^d`
    prefactor: Complex64,
}

impl Rotated {
    fn new(query: &GreenQuery, params: &RegimeParams) -> Self {
        let omegas = query.model.omegas().to_vec();
        let scale = query.omega.abs() + query.model.bandwidth();
        let mut configs = SignConfig::all(query.omega, &omegas);
        // Ties Λ = 0 belong to the upper half-plane; absorb rounding from
        // summing the couplings in a different order than the caller.
        for c in &mut configs {
            if c.lambda.abs() <= 8.0 * f64::EPSILON * scale {
                c.lambda = 0.0;
            }
        }
        let d = omegas.len() as i32;
        Rotated {
            orders: query.r.iter().map(|r| r.unsigned_abs()).collect(),
            omegas,
            omega: query.omega,
            split_t: params.split_t,
            configs,
            prefactor: i_pow(query.alpha() + 1) * 0.5f64.powi(d),
        }
    }

    /// Scaled Hankel values `h^±_k = e^{∓iz} H^±_{r_k}(z)` at `z = Ω_k (T + iτ)`.
    fn hankels(&self, tau: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let d = self.orders.len();
        let mut plus = Vec::with_capacity(d);
        let mut minus = Vec::with_capacity(d);
        for k in 0..d {
            // Axes sharing a coupling reuse one recurrence.
            if let Some(j) = (0..k).find(|&j| self.omegas[j] == self.omegas[k] && self.orders[j] == self.orders[k]) {
                plus.push(plus[j]);
                minus.push(minus[j]);
                continue;
            }
            let z = Complex64::new(self.split_t, tau) * self.omegas[k];
            let n = self.orders[k];
            let (p, m) = hankel_scaled_upto(n, z)?;
            plus.push(p[n as usize]);
            minus.push(m[n as usize]);
        }
        Ok((plus, minus))
    }

    fn f4_scaled(&self, tau: f64) -> Result<Complex64> {
        let (hp, hm) = self.hankels(tau)?;
        let mut s = Complex64::new(0.0, 0.0);
        for c in &self.configs {
            let mut prod = Complex64::new(1.0, 0.0);
            if c.lambda >= 0.0 {
                for (k, &sg) in c.sigma.iter().enumerate() {
                    prod *= if sg > 0 { hp[k] } else { hm[k] };
                }
                s += Complex64::from_polar((-c.lambda * tau).exp(), c.lambda * self.split_t) * prod;
            } else {
                for (k, &sg) in c.sigma.iter().enumerate() {
                    prod *= if sg > 0 { hm[k].conj() } else { hp[k].conj() };
                }
                s -= Complex64::from_polar((c.lambda * tau).exp(), c.lambda * self.split_t) * prod;
            }
        }
        Ok(self.prefactor * s)
    }

    fn f4_unscaled(&self, tau: f64) -> Result<Complex64> {
        let (hp, hm) = self.hankels(tau)?;
        let mut big_p = Vec::with_capacity(hp.len());
        let mut big_m = Vec::with_capacity(hm.len());
        for k in 0..hp.len() {
            let z = Complex64::new(self.split_t, tau) * self.omegas[k];
            let ep = (Complex64::i() * z).exp();
            big_p.push(hp[k] * ep);
            big_m.push(hm[k] / ep);
        }
        let x_minus = (-self.omega * tau).exp();
        let x_plus = (self.omega * tau).exp();
        let mut s = Complex64::new(0.0, 0.0);
        for c in &self.configs {
            let mut prod = Complex64::new(1.0, 0.0);
            if c.lambda >= 0.0 {
                for (k, &sg) in c.sigma.iter().enumerate() {
                    prod *= if sg > 0 { big_p[k] } else { big_m[k] };
                }
                s += x_minus * prod;
            } else {
                for (k, &sg) in c.sigma.iter().enumerate() {
                    prod *= if sg > 0 { big_m[k].conj() } else { big_p[k].conj() };
                }
                s -= x_plus * prod;
            }
        }
        let v = self.prefactor * Complex64::from_polar(1.0, self.omega * self.split_t) * s;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(ContourError::Overflow { tau })
        }
    }

    fn f4(&self, tau: f64, scaled: bool) -> Result<Complex64> {
        if scaled {
            self.f4_scaled(tau)
        } else {
            self.f4_unscaled(tau)
        }
    }
}

/// The rotated integrand `f_4(τ)` whose integral over `[0, ∞)` is `g_2`.
///
/// With `scaled` unset the Hankel products and `e^{±ωτ}` are formed
/// literally, which overflows once `Ω_k τ` reaches a few hundred. With
/// `scaled` set each term is reassembled as
/// `e^{iΛT} e^{-|Λ|τ} Π h^{±}_k`, which is always representable.
pub fn integrand_f4(query: &GreenQuery, params: &RegimeParams, tau: f64, scaled: bool) -> Result<Complex64> {
    Rotated::new(query, params).f4(tau, scaled)
}

/// Run a quadrature whose integrand can fail, keeping the first failure.
fn guarded_quad<F, Q>(piece: Piece, mut f: F, quad: Q) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
    Q: FnOnce(&mut dyn FnMut(f64) -> Complex64) -> std::result::Result<QuadResult, QuadError>,
{
    let failure: RefCell<Option<ContourError>> = RefCell::new(None);
    let mut wrapped = |t: f64| match f(t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    let res = quad(&mut wrapped);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    res.map_err(|source| ContourError::Quadrature { piece, source })
}

fn g1(query: &GreenQuery, params: &RegimeParams, cfg: &QuadConfig) -> Result<QuadResult> {
    guarded_quad(
        Piece::G1,
        |t| integrand_f1(query, t),
        |f| integrate_finite(f, 0.0, params.split_t, cfg),
    )
}

/// `(2/(d-2)) ∫_0^{η^{1-d/2}} τ^{d/2} g(τ) du` with `τ = u^{2/(2-d)}`, which
/// equals `∫_η^∞ g(τ) dτ` and has a bounded integrand when `g ~ τ^{-d/2}`.
fn folded_tail<G>(d: usize, eta: f64, piece: Piece, mut g: G, cfg: &QuadConfig) -> Result<QuadResult>
where
    G: FnMut(f64) -> Result<Complex64>,
{
    if d < 3 {
        return Err(ContourError::UnsupportedFold { d });
    }
    let dd = d as f64;
    let upper = eta.powf(1.0 - 0.5 * dd);
    let jac = 2.0 / (dd - 2.0);
    guarded_quad(
        piece,
        |u| {
            let tau = u.powf(2.0 / (2.0 - dd));
            Ok(g(tau)? * (jac * tau.powf(0.5 * dd)))
        },
        |f| integrate_finite(f, 0.0, upper, cfg),
    )
}

fn finish(regime: Regime, g1: Option<QuadResult>, g2: QuadResult, value: Complex64) -> GreenValue {
    let first = g1.unwrap_or(QuadResult::ZERO);
    GreenValue {
        value,
        regime,
        evals: first.evals + g2.evals,
        err_estimate: first.err_estimate + g2.err_estimate,
        g1,
        g2,
    }
}

/// Outside the band (`|ω| >= W`):
/// `G_r(ω) = (-1)^{Σr} ∫_0^∞ e^{-ωτ} Π I_{r_k}(Ω_k τ) dτ` for `ω >= W`, and the
/// frequency reflection `G_r(-ω) = -(-1)^{Σr} G_r(ω)*` for `ω <= -W`.
///
/// At `|ω| = W` the integrand decays only like `τ^{-d/2}` and the tail is
/// folded (d ≥ 3); d ≤ 2 diverges there.
pub fn green_outside_band(query: &GreenQuery, params: &RegimeParams, cfg: &QuadConfig) -> Result<GreenValue> {
    let w = query.model.bandwidth();
    let omega = query.omega;
    if omega.abs() < w - params.vh_tol {
        return Err(ContourError::WrongRegime {
            operation: "green_outside_band",
            regime: classify(query, params),
        });
    }
    let d = query.dim();
    let at_edge = omega.abs() - w <= params.vh_tol;
    let excess = if at_edge { 0.0 } else { omega.abs() - w };
    if at_edge && d <= 2 {
        return Err(ContourError::Divergent { d, omega });
    }
    let parity = if (query.alpha() + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let orders: Vec<u32> = query.r.iter().map(|r| r.unsigned_abs()).collect();
    let omegas = query.model.omegas();
    let integrand = |tau: f64| -> Result<Complex64> {
        let mut prod = (-excess * tau).exp();
        for (n, om) in orders.iter().zip(omegas) {
            prod *= bessel_i_scaled(*n, om * tau)?;
        }
        Ok(Complex64::new(prod, 0.0))
    };
    let res = if at_edge {
        let eta = params.fold_eta;
        let head = guarded_quad(Piece::Outside, integrand, |f| integrate_finite(f, 0.0, eta, cfg))?;
        let tail = folded_tail(d, eta, Piece::Outside, integrand, cfg)?;
        head.combine(tail)
    } else {
        guarded_quad(Piece::Outside, integrand, |f| integrate_ray(f, 0.0, cfg))?
    };
    if res.value.im.abs() > REALITY_TOL * res.value.re.abs().max(1.0) {
        return Err(ContourError::InvalidQuery(format!(
            "outside-band integral has imaginary part {}",
            res.value.im
        )));
    }
    let mut value = parity * res.value.re;
    if omega < 0.0 {
        value *= -parity;
    }
    let regime = if at_edge {
        Regime::AtVanHove
    } else {
        Regime::OutsideBand
    };
    Ok(finish(regime, None, res, Complex64::new(value, 0.0)))
}

/// In-band evaluation `g_1 + g_2` for the generic and near-van-Hove regimes.
///
/// Generic queries start with unscaled Hankel functions and fall back to the
/// scaled form if they overflow; near a van Hove frequency the scaled form is
/// used from the start.
pub fn green_inband(query: &GreenQuery, params: &RegimeParams, cfg: &QuadConfig) -> Result<GreenValue> {
    let regime = classify(query, params);
    if !matches!(regime, Regime::Generic | Regime::NearVanHove) {
        return Err(ContourError::WrongRegime {
            operation: "green_inband",
            regime,
        });
    }
    let first = g1(query, params, cfg)?;
    let rot = Rotated::new(query, params);
    let ray = |scaled: bool, cfg: &QuadConfig| {
        guarded_quad(Piece::G2, |tau| rot.f4(tau, scaled), |f| integrate_ray(f, 0.0, cfg))
    };
    let mut spent = 0;
    let second = if regime == Regime::NearVanHove {
        ray(true, cfg)?
    } else {
        match ray(false, cfg) {
            Ok(r) => r,
            Err(ContourError::Overflow { .. }) => {
                // The wasted calls are still charged to the result.
                spent = count_until_overflow(&rot, cfg);
                ray(true, cfg)?
            }
            Err(e) => return Err(e),
        }
    };
    let second = QuadResult {
        evals: second.evals + spent,
        ..second
    };
    Ok(finish(regime, Some(first), second, first.value + second.value))
}

/// Number of integrand calls the unscaled attempt made before overflowing.
fn count_until_overflow(rot: &Rotated, cfg: &QuadConfig) -> usize {
    let mut calls = 0;
    let mut failed = false;
    let _ = integrate_ray(
        |tau| {
            if failed {
                return Complex64::new(f64::NAN, 0.0);
            }
            calls += 1;
            match rot.f4_unscaled(tau) {
                Ok(v) => v,
                Err(_) => {
                    failed = true;
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        0.0,
        cfg,
    );
    calls
}

/// Evaluation exactly at a van Hove frequency: `g_1` plus
/// `∫_0^η f_4 dτ + (2/(d-2)) ∫_0^{η^{1-d/2}} u^{d/(2-d)} f_4(u^{2/(2-d)}) du`.
///
/// `ω` is snapped to the nearest van Hove frequency first. d ≤ 2 is rejected
/// because the rotated integrand is not integrable at infinity there.
pub fn green_at_van_hove(query: &GreenQuery, params: &RegimeParams, cfg: &QuadConfig) -> Result<GreenValue> {
    let regime = classify(query, params);
    if regime != Regime::AtVanHove {
        return Err(ContourError::WrongRegime {
            operation: "green_at_van_hove",
            regime,
        });
    }
    let d = query.dim();
    if d <= 2 {
        return Err(ContourError::UnsupportedFold { d });
    }
    let (snapped, _) = nearest_van_hove(&query.model, query.omega);
    let q = query.with_omega(snapped);
    let first = g1(&q, params, cfg)?;
    let rot = Rotated::new(&q, params);
    let eta = params.fold_eta;
    let head = guarded_quad(
        Piece::G2,
        |tau| rot.f4_scaled(tau),
        |f| integrate_finite(f, 0.0, eta, cfg),
    )?;
    let tail = folded_tail(d, eta, Piece::G2, |tau| rot.f4_scaled(tau), cfg)?;
    let second = head.combine(tail);
    Ok(finish(regime, Some(first), second, first.value + second.value))
}

/// Classify and evaluate. Values with `|ω| >= W` are real.
///
/// The query is brought to [`GreenQuery::canonical`] form first, so the
/// result is exactly invariant under axis permutations and `r_k -> -r_k`.
pub fn green(query: &GreenQuery, params: &RegimeParams, cfg: &QuadConfig) -> Result<GreenValue> {
    let canonical = query.canonical();
    let query = &canonical;
    let regime = classify(query, params);
    let mut out = match regime {
        Regime::OutsideBand => green_outside_band(query, params, cfg)?,
        Regime::Generic | Regime::NearVanHove => green_inband(query, params, cfg)?,
        Regime::AtVanHove => {
            if query.dim() <= 2 {
                return Err(ContourError::Divergent {
                    d: query.dim(),
                    omega: query.omega,
                });
            }
            green_at_van_hove(query, params, cfg)?
        }
    };
    if query.omega.abs() >= query.model.bandwidth() - params.vh_tol {
        out.value.im = 0.0;
    }
    Ok(out)
}
