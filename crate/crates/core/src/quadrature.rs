//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands.
//!
//! [`integrate_finite`] is a globally adaptive bisection scheme built on the
//! 15-point Kronrod extension of the 7-point Gauss rule, with the QUADPACK
//! error heuristic. [`integrate_ray`] covers `[a, ∞)` with geometrically
//! growing panels, each integrated by [`integrate_finite`].
//!
//! Every integrand call is counted, and the count is part of the result.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Kronrod abscissae on `[-1, 1]`, positive half, descending. Odd indices are
/// the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integrand calls per application of the rule.
pub const EVALS_PER_RULE: usize = 15;

/// Panels a ray integral may use before giving up.
const MAX_RAY_PANELS: usize = 64;

/// Panels before the divergence heuristic is consulted.
const DIVERGENCE_WARMUP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// A ray integral stops once a panel's `∫|f|` falls below
    /// `tail_ratio * max(abs_tol, rel_tol * |accumulated value|)`.
    pub tail_ratio: f64,
    /// Length of the first panel of a ray integral; panel `k` has length
    /// `first_panel * 2^k`.
    pub first_panel: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_evals: 100_000,
            tail_ratio: 0.1,
            first_panel: 2.0,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_estimate: f64,
    pub evals: usize,
}

impl QuadResult {
    pub const ZERO: QuadResult = QuadResult {
        value: Complex64::new(0.0, 0.0),
        err_estimate: 0.0,
        evals: 0,
    };

    /// Sum of values and error bounds, total evaluation count.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            evals: self.evals + other.evals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("evaluation budget of {max_evals} exhausted (best estimate {best:?})")]
    MaxEvals { max_evals: usize, best: QuadResult },
    #[error("integrand returned a non-finite value at t = {at}")]
    NonFinite { at: f64, evals: usize },
    #[error("integrand does not appear to decay (last panel ends at t = {at})")]
    DivergenceSuspected { at: f64, best: QuadResult },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
}

impl QuadError {
    /// Integrand calls made before the failure.
    pub fn evals(&self) -> usize {
        match self {
            QuadError::MaxEvals { best, .. } | QuadError::DivergenceSuspected { best, .. } => best.evals,
            QuadError::NonFinite { evals, .. } => *evals,
            QuadError::InvalidInterval { .. } => 0,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// One GK15 application on `[a, b]`.
fn gk15<F>(f: &mut F, a: f64, b: f64, evals: &mut usize) -> Result<Segment, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut call = |t: f64, evals: &mut usize| -> Result<Complex64, QuadError> {
        *evals += 1;
        let v = f(t);
        if finite(v) {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { at: t, evals: *evals })
        }
    };

    let fc = call(center, evals)?;
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = call(center - dx, evals)?;
        let f2 = call(center + dx, evals)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;

    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Ok(Segment {
        a,
        b,
        value,
        err,
        abs: res_abs,
    })
}

/// Adaptive integral over `[a, b]` and the accompanying estimate of `∫|f|`.
fn adaptive<F>(f: &mut F, a: f64, b: f64, cfg: &QuadConfig) -> Result<(QuadResult, f64), QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok((QuadResult::ZERO, 0.0));
    }
    let mut evals = 0;
    let first = gk15(f, a, b, &mut evals)?;
    let mut value = first.value;
    let mut err = first.err;
    let mut abs = first.abs;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if err <= cfg.target(value) {
            break;
        }
        if evals + 2 * EVALS_PER_RULE > cfg.max_evals {
            return Err(QuadError::MaxEvals {
                max_evals: cfg.max_evals,
                best: QuadResult {
                    value,
                    err_estimate: err,
                    evals,
                },
            });
        }
        let worst = heap.pop().expect("segment heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Cannot bisect further in floating point; accept what we have.
            heap.push(worst);
            break;
        }
        let left = gk15(f, worst.a, mid, &mut evals)?;
        let right = gk15(f, mid, worst.b, &mut evals)?;
        value += left.value + right.value - worst.value;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        // Re-summing avoids drift from repeated add/subtract of error terms.
        err = heap.iter().map(|s| s.err).sum();
    }
    let value: Complex64 = heap.iter().map(|s| s.value).sum();
    Ok((
        QuadResult {
            value,
            err_estimate: err,
            evals,
        },
        abs,
    ))
}

/// `∫_a^b f(t) dt` by globally adaptive GK15 bisection.
pub fn integrate_finite<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    adaptive(&mut f, a, b, cfg).map(|(r, _)| r)
}

/// `∫_a^∞ f(t) dt` for integrands that decay exponentially or faster than
/// `t^{-3/2}`.
///
/// Panel `k` is `[a + L(2^k - 1), a + L(2^{k+1} - 1)]` with
/// `L = cfg.first_panel`. The evaluation budget is shared by all panels.
pub fn integrate_ray<F>(mut f: F, a: f64, cfg: &QuadConfig) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if !a.is_finite() || !(cfg.first_panel > 0.0) {
        return Err(QuadError::InvalidInterval { a, b: f64::INFINITY });
    }
    let mut total = QuadResult::ZERO;
    let mut prev_density = f64::INFINITY;
    let mut rising = 0;
    let mut len = cfg.first_panel;
    let mut lo = a;
    for panel in 0..MAX_RAY_PANELS {
        let hi = lo + len;
        let panel_cfg = QuadConfig {
            abs_tol: cfg.target(total.value),
            max_evals: cfg.max_evals.saturating_sub(total.evals),
            ..*cfg
        };
        let (part, abs) = match adaptive(&mut f, lo, hi, &panel_cfg) {
            Ok(v) => v,
            Err(QuadError::MaxEvals { best, .. }) => {
                return Err(QuadError::MaxEvals {
                    max_evals: cfg.max_evals,
                    best: total.combine(best),
                })
            }
            Err(QuadError::NonFinite { at, evals }) => {
                return Err(QuadError::NonFinite {
                    at,
                    evals: total.evals + evals,
                })
            }
            Err(e) => return Err(e),
        };
        total = total.combine(part);
        if abs <= cfg.tail_ratio * cfg.target(total.value) {
            return Ok(total);
        }
        let density = abs / len;
        if density >= prev_density {
            rising += 1;
        } else {
            rising = 0;
        }
        prev_density = density;
        if panel + 1 >= DIVERGENCE_WARMUP && rising >= 3 {
            return Err(QuadError::DivergenceSuspected { at: hi, best: total });
        }
        lo = hi;
        len *= 2.0;
    }
    Err(QuadError::DivergenceSuspected { at: lo, best: total })
}
