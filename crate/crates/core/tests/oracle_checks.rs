//! Brute-force evaluators against closed forms and the contour method.

mod common;

use common::{contour, iso, random_generic};
use hlgf_core::oracle::bz_green_converged;
use hlgf_core::{
    bz_green, green_outside_band, time_green, BZOracleConfig, GreenQuery, LatticeModel, QuadConfig, RegimeParams,
};

fn bz(eta: f64, grid_n: usize, richardson: bool) -> BZOracleConfig {
    BZOracleConfig {
        eta,
        grid_n,
        richardson,
        ..Default::default()
    }
}

#[test]
fn chain_outside_band_closed_form() {
    let g = bz_green(&iso(1, &[0], 2.0), &bz(0.0, 64, false)).unwrap();
    assert!((g.re - 1.0 / 3f64.sqrt()).abs() < 1e-6 && g.im == 0.0);
    // the shifted sum agrees as well
    let shifted = bz_green(&iso(1, &[0], 2.0), &bz(1e-4, 64, true)).unwrap();
    assert!((shifted.re - 1.0 / 3f64.sqrt()).abs() < 1e-6);
}

#[test]
fn cubic_band_edge_on_coarse_grid() {
    // at the band edge the shift bias goes like √η: about 7e-3 at η = 1e-3
    let q = iso(3, &[0, 0, 0], 3.0);
    let target = 0.50546201972;
    let full = BZOracleConfig {
        analytic_axis: false,
        ..bz(1e-3, 64, false)
    };
    let g = bz_green(&q, &full).unwrap();
    assert!((g.re - target).abs() < 1e-2 && g.im.abs() < 1e-2, "{g}");
    let g = bz_green(&q, &bz(1e-3, 1024, true)).unwrap();
    assert!((g.re - target).abs() < 3e-3 && g.im.abs() < 3e-3, "{g}");
}

#[test]
fn square_lattice_offsite_matches_contour() {
    let q = iso(2, &[1, 1], 0.5);
    let (g, _) = bz_green_converged(&q, &bz(1e-4, 1024, true), 1e-7).unwrap();
    let c = contour(&q).unwrap();
    assert!((g - c).norm() < 1e-4, "{g} {c}");
}

#[test]
fn eta_error_is_linear() {
    for q in random_generic(11, 10, 2..=2, 0.1) {
        let at = |eta: f64| bz_green_converged(&q, &bz(eta, 512, false), 1e-10).unwrap().0;
        let (a, b, c) = (at(4e-2), at(2e-2), at(1e-2));
        let ratio = (b - c).norm() / (a - b).norm();
        assert!((0.3..=0.7).contains(&ratio), "r={:?} ω={}: {ratio}", q.r, q.omega);
    }
}

#[test]
fn unshifted_sum_outside_band() {
    let cases = [
        iso(1, &[0], 1.5),
        iso(1, &[3], -2.2),
        iso(2, &[0, 0], 2.5),
        iso(2, &[1, 2], -3.0),
        GreenQuery::new(LatticeModel::new(vec![0.7, 1.2]).unwrap(), vec![2, 1], 2.4).unwrap(),
    ];
    for q in &cases {
        let g = bz_green(q, &bz(0.0, 256, false)).unwrap();
        let reference = green_outside_band(q, &RegimeParams::default(), &QuadConfig::default())
            .unwrap()
            .value;
        assert!(
            (g - reference).norm() < 1e-8,
            "r={:?} ω={}: {g} {reference}",
            q.r,
            q.omega
        );
    }
}

#[test]
fn full_grid_and_analytic_axis_agree() {
    let q = iso(2, &[1, 0], 2.6);
    let full = BZOracleConfig {
        analytic_axis: false,
        ..bz(0.0, 256, false)
    };
    let a = bz_green(&q, &full).unwrap();
    let b = bz_green(&q, &bz(0.0, 256, false)).unwrap();
    assert!((a - b).norm() < 1e-12);
}

#[test]
fn grid_budget_is_enforced() {
    let cfg = BZOracleConfig {
        max_points: 1000,
        ..bz(1e-2, 64, false)
    };
    assert!(bz_green(&iso(3, &[0, 0, 0], 0.5), &cfg).is_err());
    assert!(bz_green(&iso(1, &[0], 0.5), &bz(0.0, 64, false)).is_err());
}

#[test]
fn truncated_time_integral_chain() {
    let t = time_green(&iso(1, &[0], 2.0), 500.0, &QuadConfig::default()).unwrap();
    assert!((t.value.re - 1.0 / 3f64.sqrt()).abs() < 1e-2, "{}", t.value);
    assert!(t.tail_bound.is_infinite());
}

#[test]
fn truncated_time_integral_within_tail_bound() {
    let q = iso(4, &[0, 0, 0, 0], 4.5);
    let reference = contour(&q).unwrap();
    let mut last = f64::INFINITY;
    for t_max in [50.0, 100.0, 200.0] {
        let t = time_green(&q, t_max, &QuadConfig::default()).unwrap();
        let err = (t.value - reference).norm();
        assert!(err <= t.tail_bound, "t_max={t_max}: {err} > {}", t.tail_bound);
        assert!(err < last);
        last = err;
    }
}

#[test]
fn truncated_time_integral_converges_in_three_dimensions() {
    let q = iso(3, &[1, 0, 0], 0.7);
    let reference = contour(&q).unwrap();
    let e100 = (time_green(&q, 100.0, &QuadConfig::default()).unwrap().value - reference).norm();
    let e1000 = (time_green(&q, 1000.0, &QuadConfig::default()).unwrap().value - reference).norm();
    assert!(e1000 < e100);
}

#[test]
fn truncated_time_integral_reports_budget_exhaustion() {
    let cfg = QuadConfig {
        max_evals: 2000,
        ..Default::default()
    };
    let t = time_green(&iso(4, &[1, 2, 2, 3], 1.0), 3000.0, &cfg).unwrap();
    assert!(!t.converged);
    assert!(t.evals <= 2000);
}
