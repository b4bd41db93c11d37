//! Real-frequency Green functions of anisotropic hypercubic lattices.
//!
//! `G_r(ω)` for nearest-neighbour hopping `Ω_k/2` along axis `k` is computed
//! by splitting its time-domain integral and rotating the tail into the
//! complex plane ([`contour`]). A Levin collocation engine ([`levin`]) and
//! brute-force evaluators ([`oracle`]) serve as cross-checks. The special
//! functions and quadrature are implemented in-crate ([`specfun`],
//! [`quadrature`]).
//!
//! ```
//! use hlgf_core::{green, GreenQuery, LatticeModel, QuadConfig, RegimeParams};
//!
//! let model = LatticeModel::isotropic(3, 1.0).unwrap();
//! let q = GreenQuery::new(model, vec![1, 0, 0], 0.0).unwrap();
//! let g = green(&q, &RegimeParams::default(), &QuadConfig::default()).unwrap();
//! assert!((g.value.re - 1.0 / 3.0).abs() < 1e-10);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour;
pub mod levin;
pub mod oracle;
pub mod quadrature;
pub mod reference;
pub mod specfun;

pub use contour::{
    classify, green, green_at_van_hove, green_inband, green_outside_band, integrand_f1, integrand_f4,
    van_hove_frequencies, ContourError, GreenQuery, GreenValue, LatticeModel, Piece, Regime, RegimeParams, SignConfig,
};
pub use levin::{
    build_bessel_basis, build_reduced_onsite_basis, chebyshev_nodes, levin_integrate, solve_collocation,
    CollocationSolution, LevinError, LevinProblem,
};
pub use num_complex::Complex64;
pub use oracle::{bz_green, helmholtz_residual, time_green, BZOracleConfig, OracleError, TimeGreen};
pub use quadrature::{integrate_finite, integrate_ray, QuadConfig, QuadError, QuadResult};
pub use reference::{ReferenceValue, REFERENCE_VALUES};
pub use specfun::{HankelKind, SpecfunError};
