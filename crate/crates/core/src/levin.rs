//! Levin collocation for `∫_a^b f_i(t) w_i(t) dt`, where the oscillatory basis
//! obeys `w' = A w` with slowly varying `A`.
//!
//! The antiderivative envelope `F` solves `F' + Aᵀ F = f`. Expanding each `F_i`
//! in Chebyshev polynomials and collocating at the `m` Chebyshev extrema gives
//! an `mn × mn` dense system. The integral is then `F·w` at `b` minus `F·w`
//! at `a`, so the basis is only ever evaluated at the two endpoints.

use crate::contour::GreenQuery;
use crate::specfun::{bessel_j_with_derivative, SpecfunError};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Largest acceptable 2-norm condition number of the collocation matrix.
pub const MAX_CONDITION: f64 = 1e14;

/// Relative residual up to which a rank-deficient system counts as consistent.
const RANK_DEFICIENT_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LevinError {
    #[error("need at least 2 collocation points, got {0}")]
    TooFewNodes(usize),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("the Bessel kernel is singular at t = 0; need a > 0, got a = {a}")]
    SingularKernel { a: f64 },
    #[error("collocation matrix is ill-conditioned (condition number {cond:.3e})")]
    IllConditioned { cond: f64 },
    #[error("kernel or forcing is not finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("the reduced basis needs an isotropic model and r = 0")]
    NotOnSite,
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

pub type Result<T> = std::result::Result<T, LevinError>;

type MatrixFn<'a> = Box<dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync + 'a>;
type VectorFn<'a> = Box<dyn Fn(f64) -> DVector<Complex64> + Send + Sync + 'a>;
type BasisFn<'a> = Box<dyn Fn(f64) -> Result<DVector<Complex64>> + Send + Sync + 'a>;

pub struct LevinProblem<'a> {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    /// `A(t)` with `w_i' = A_ij w_j`.
    pub kernel: MatrixFn<'a>,
    pub forcing: VectorFn<'a>,
    /// Only evaluated at `a` and `b`.
    pub basis: BasisFn<'a>,
}

impl<'a> LevinProblem<'a> {
    /// Multiply the forcing by a constant.
    pub fn scale_forcing(self, c: Complex64) -> Self {
        let forcing = self.forcing;
        LevinProblem {
            forcing: Box::new(move |t| forcing(t) * c),
            ..self
        }
    }
}

/// Chebyshev coefficients of the antiderivative envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSolution {
    pub m: usize,
    pub a: f64,
    pub b: f64,
    /// `n × m`; row `i` holds the coefficients of `F_i`.
    pub coeffs: DMatrix<Complex64>,
    /// 2-norm condition number of the collocation matrix, restricted to its
    /// numerical range when the matrix is rank deficient.
    pub condition: f64,
}

impl CollocationSolution {
    fn x(&self, t: f64) -> f64 {
        (2.0 * t - self.b - self.a) / (self.b - self.a)
    }

    /// `F(t)`.
    pub fn envelope(&self, t: f64) -> DVector<Complex64> {
        let (tk, _) = chebyshev_tu(self.m, self.x(t));
        &self.coeffs * DVector::from_iterator(self.m, tk.into_iter().map(|v| Complex64::new(v, 0.0)))
    }

    /// `F'(t)`.
    pub fn envelope_derivative(&self, t: f64) -> DVector<Complex64> {
        let d = derivative_row(self.m, self.x(t), self.a, self.b);
        &self.coeffs * DVector::from_iterator(self.m, d.into_iter().map(|v| Complex64::new(v, 0.0)))
    }

    /// `F' + Aᵀ F - f` at `t`.
    pub fn residual(&self, problem: &LevinProblem<'_>, t: f64) -> DVector<Complex64> {
        let f = self.envelope(t);
        self.envelope_derivative(t) + (problem.kernel)(t).transpose() * f - (problem.forcing)(t)
    }
}

/// Extrema of the degree `m-1` Chebyshev polynomial mapped to `[a, b]`,
/// ascending, with both endpoints included exactly.
pub fn chebyshev_nodes(m: usize, a: f64, b: f64) -> Vec<f64> {
    assert!(m >= 2, "need at least two nodes");
    (0..m)
        .map(|l| {
            if l == 0 {
                a
            } else if l == m - 1 {
                b
            } else {
                0.5 * (b + a - (b - a) * (l as f64 * PI / (m - 1) as f64).cos())
            }
        })
        .collect()
}

/// `T_0..T_{m-1}` and `U_0..U_{m-1}` at `x`.
fn chebyshev_tu(m: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![0.0; m];
    let mut u = vec![0.0; m];
    t[0] = 1.0;
    u[0] = 1.0;
    if m > 1 {
        t[1] = x;
        u[1] = 2.0 * x;
    }
    for k in 2..m {
        t[k] = 2.0 * x * t[k - 1] - t[k - 2];
        u[k] = 2.0 * x * u[k - 1] - u[k - 2];
    }
    (t, u)
}

/// `u_k'(t) = 2k/(b-a) U_{k-1}(x)` for `k = 0..m-1`.
fn derivative_row(m: usize, x: f64, a: f64, b: f64) -> Vec<f64> {
    let (_, u) = chebyshev_tu(m, x);
    (0..m)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                2.0 * k as f64 / (b - a) * u[k - 1]
            }
        })
        .collect()
}

/// Solve `[u_k'(t_l) δ_ij + A_ji(t_l) u_k(t_l)] c_jk = f_i(t_l)` by LU.
///
/// The cost is `O(m³n³)`.
pub fn solve_collocation(problem: &LevinProblem<'_>, m: usize) -> Result<CollocationSolution> {
    if m < 2 {
        return Err(LevinError::TooFewNodes(m));
    }
    let (a, b, n) = (problem.a, problem.b, problem.n);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(LevinError::InvalidInterval { a, b });
    }
    let size = n * m;
    let mut mat = DMatrix::<Complex64>::zeros(size, size);
    let mut rhs = DVector::<Complex64>::zeros(size);
    for (l, &t) in chebyshev_nodes(m, a, b).iter().enumerate() {
        let x = (2.0 * t - b - a) / (b - a);
        let (tk, _) = chebyshev_tu(m, x);
        let dk = derivative_row(m, x, a, b);
        let kern = (problem.kernel)(t);
        let forc = (problem.forcing)(t);
        if kern
            .iter()
            .chain(forc.iter())
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(LevinError::NonFinite { t });
        }
        for i in 0..n {
            let row = i * m + l;
            rhs[row] = forc[i];
            for k in 0..m {
                mat[(row, i * m + k)] += Complex64::new(dk[k], 0.0);
                for j in 0..n {
                    mat[(row, j * m + k)] += kern[(j, i)] * tk[k];
                }
            }
        }
    }
    let sv = mat.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let cutoff = smax / MAX_CONDITION;
    let (sol, condition) = if smin > cutoff {
        let sol = mat
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(LevinError::IllConditioned { cond: f64::INFINITY })?;
        (sol, smax / smin)
    } else {
        // Homogeneous solutions of F' + AᵀF = 0 keep F·w constant and drop
        // out of the endpoint difference, so a consistent rank-deficient
        // system is solved in the minimum-norm sense. An inconsistent one is
        // genuinely ill-posed.
        let svd = mat.clone().svd(true, true);
        let sol = svd
            .solve(&rhs, cutoff)
            .map_err(|_| LevinError::IllConditioned { cond: f64::INFINITY })?;
        let resid = (&mat * &sol - &rhs).norm();
        if !(resid <= RANK_DEFICIENT_RESIDUAL * rhs.norm().max(f64::MIN_POSITIVE)) {
            let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
            return Err(LevinError::IllConditioned { cond });
        }
        let retained = sv.iter().copied().filter(|&v| v > cutoff).fold(f64::INFINITY, f64::min);
        (sol, smax / retained)
    };
    let coeffs = DMatrix::from_fn(n, m, |i, k| sol[i * m + k]);
    Ok(CollocationSolution {
        m,
        a,
        b,
        coeffs,
        condition,
    })
}

/// `I = F(b)·w(b) - F(a)·w(a)`.
pub fn levin_integrate(problem: &LevinProblem<'_>, m: usize) -> Result<Complex64> {
    let sol = solve_collocation(problem, m)?;
    let wb = (problem.basis)(problem.b)?;
    let wa = (problem.basis)(problem.a)?;
    let fb = sol.envelope(problem.b);
    let fa = sol.envelope(problem.a);
    Ok(fb.dot(&wb) - fa.dot(&wa))
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0) {
        return Err(LevinError::SingularKernel { a });
    }
    if !(b.is_finite() && b > a) {
        return Err(LevinError::InvalidInterval { a, b });
    }
    Ok(())
}

/// The `2^d` basis `w_S = e^{iωt} Π_{k∈S} J'_{r_k}(Ω_k t) Π_{k∉S} J_{r_k}(Ω_k t)`,
/// indexed by the bit mask of `S`, for the integrand
/// `f_1 = i^α e^{iωt} Π J_{r_k}(Ω_k t)` on `[a, b]`.
pub fn build_bessel_basis<'q>(query: &'q GreenQuery, a: f64, b: f64) -> Result<LevinProblem<'q>> {
    check_interval(a, b)?;
    let d = query.dim();
    let n = 1usize << d;
    let omega = query.omega;
    let omegas = query.model.omegas();
    let orders: Vec<f64> = query.r.iter().map(|r| r.unsigned_abs() as f64).collect();
    let kernel = {
        let orders = orders.clone();
        move |t: f64| {
            let mut a_mat = DMatrix::<Complex64>::zeros(n, n);
            for s in 0..n {
                a_mat[(s, s)] += Complex64::new(0.0, omega);
                for k in 0..d {
                    let w = omegas[k];
                    let bit = 1usize << k;
                    if s & bit == 0 {
                        // d/dt J(Ωt) = Ω J'(Ωt)
                        a_mat[(s, s | bit)] += Complex64::new(w, 0.0);
                    } else {
                        // d/dt J'(Ωt) = Ω [(r²/(Ωt)² - 1) J - J'/(Ωt)]
                        let x = w * t;
                        let r = orders[k];
                        a_mat[(s, s & !bit)] += Complex64::new(w * (r * r / (x * x) - 1.0), 0.0);
                        a_mat[(s, s)] -= Complex64::new(1.0 / t, 0.0);
                    }
                }
            }
            a_mat
        }
    };
    let force = i_pow(query.alpha());
    let basis = move |t: f64| -> Result<DVector<Complex64>> {
        let mut pairs = Vec::with_capacity(d);
        for (r, w) in query.r.iter().zip(omegas) {
            pairs.push(bessel_j_with_derivative(r.unsigned_abs(), w * t)?);
        }
        let phase = Complex64::from_polar(1.0, omega * t);
        Ok(DVector::from_fn(n, |s, _| {
            let prod: f64 = pairs
                .iter()
                .enumerate()
                .map(|(k, (j, jp))| if s >> k & 1 == 1 { *jp } else { *j })
                .product();
            phase * prod
        }))
    };
    Ok(LevinProblem {
        n,
        a,
        b,
        kernel: Box::new(kernel),
        forcing: Box::new(move |_| {
            let mut f = DVector::zeros(n);
            f[0] = force;
            f
        }),
        basis: Box::new(basis),
    })
}

/// The `d+1` basis `w_i = e^{iωt} J_0'(Ωt)^{d-i} J_0(Ωt)^i`, `i = 0..d`, for
/// the on-site integrand of an isotropic model.
pub fn build_reduced_onsite_basis<'q>(query: &'q GreenQuery, a: f64, b: f64) -> Result<LevinProblem<'q>> {
    check_interval(a, b)?;
    let omegas = query.model.omegas();
    if query.r.iter().any(|&r| r != 0) || omegas.iter().any(|&w| w != omegas[0]) {
        return Err(LevinError::NotOnSite);
    }
    let d = query.dim();
    let n = d + 1;
    let w = omegas[0];
    let omega = query.omega;
    let kernel = move |t: f64| {
        let mut a_mat = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            let p = (d - i) as f64;
            a_mat[(i, i)] = Complex64::new(-p / t, omega);
            if i + 1 < n {
                a_mat[(i, i + 1)] = Complex64::new(-p * w, 0.0);
            }
            if i > 0 {
                a_mat[(i, i - 1)] = Complex64::new(i as f64 * w, 0.0);
            }
        }
        a_mat
    };
    let force = i_pow(query.alpha());
    let basis = move |t: f64| -> Result<DVector<Complex64>> {
        let (j, jp) = bessel_j_with_derivative(0, w * t)?;
        let phase = Complex64::from_polar(1.0, omega * t);
        Ok(DVector::from_fn(n, |i, _| {
            phase * jp.powi((d - i) as i32) * j.powi(i as i32)
        }))
    };
    Ok(LevinProblem {
        n,
        a,
        b,
        kernel: Box::new(kernel),
        forcing: Box::new(move |_| {
            let mut f = DVector::zeros(n);
            f[n - 1] = force;
            f
        }),
        basis: Box::new(basis),
    })
}
