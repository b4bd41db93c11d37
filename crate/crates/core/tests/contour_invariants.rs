//! Symmetries and analytic properties of G over randomized queries.

use hlgf_core::contour::nearest_van_hove;
use hlgf_core::specfun::{bessel_j, hankel, HankelKind};
use hlgf_core::{
    green, green_at_van_hove, integrand_f1, integrand_f4, Complex64, GreenQuery, LatticeModel, QuadConfig, Regime,
    RegimeParams,
};
use proptest::prelude::*;

fn eval(q: &GreenQuery, params: &RegimeParams) -> Complex64 {
    green(q, params, &QuadConfig::default()).unwrap().value
}

fn default_eval(q: &GreenQuery) -> Complex64 {
    eval(q, &RegimeParams::default())
}

fn iso(d: usize, r: &[i32], omega: f64) -> GreenQuery {
    GreenQuery::new(LatticeModel::isotropic(d, 1.0).unwrap(), r.to_vec(), omega).unwrap()
}

/// Random anisotropic model with `d` in `dims`, `|r_k| <= 3`, and `ω` at
/// position `u ∈ [0, 1]` across `[-W - 1, W + 1]`.
fn queries(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = GreenQuery> {
    prop::collection::vec((0.3f64..1.5, -3i32..=3), dims)
        .prop_flat_map(|axes| (Just(axes), 0.0f64..1.0))
        .prop_map(|(axes, u)| {
            let model = LatticeModel::new(axes.iter().map(|a| a.0).collect()).unwrap();
            let w = model.bandwidth();
            let omega = (2.0 * u - 1.0) * (w + 1.0);
            GreenQuery::new(model, axes.iter().map(|a| a.1).collect(), omega).unwrap()
        })
}

fn generic(q: &GreenQuery) -> bool {
    nearest_van_hove(&q.model, q.omega).1 >= 0.05
}

fn sign_sum(q: &GreenQuery) -> f64 {
    if q.r.iter().map(|x| x.abs()).sum::<i32>() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn split_point_independence(q in queries(1..=4)) {
        prop_assume!(generic(&q) && q.omega.abs() < q.model.bandwidth());
        let at = |t: f64| eval(&q, &RegimeParams { split_t: t, ..Default::default() });
        let (a, b, c) = (at(2.0), at(3.0), at(5.0));
        let scale = a.norm().max(1.0);
        prop_assert!((a - b).norm() <= 1e-11 * scale, "{a} {b}");
        prop_assert!((b - c).norm() <= 1e-11 * scale, "{b} {c}");
    }

    #[test]
    fn lattice_reflection_and_permutation(q in queries(1..=4), seed in 0usize..24) {
        prop_assume!(nearest_van_hove(&q.model, q.omega).1 > 1e-3);
        let g = default_eval(&q);
        let mut flipped = q.clone();
        flipped.r.iter_mut().for_each(|x| *x = -*x);
        prop_assert_eq!(default_eval(&flipped), g);
        let mut one = q.clone();
        one.r[seed % q.dim()] *= -1;
        prop_assert_eq!(default_eval(&one), g);
        // rotate the axis list by `seed`
        let d = q.dim();
        let k = seed % d;
        let omegas: Vec<f64> = (0..d).map(|i| q.model.omegas()[(i + k) % d]).collect();
        let r: Vec<i32> = (0..d).map(|i| q.r[(i + k) % d]).collect();
        let p = GreenQuery::new(LatticeModel::new(omegas).unwrap(), r, q.omega).unwrap();
        let gp = default_eval(&p);
        prop_assert!((gp - g).norm() <= 1e-12 * g.norm().max(1.0), "{gp} {g}");
    }

    #[test]
    fn frequency_reflection(q in queries(1..=4)) {
        prop_assume!(nearest_van_hove(&q.model, q.omega).1 > 1e-3);
        let mut m = q.clone();
        m.omega = -q.omega;
        let lhs = default_eval(&m);
        let rhs = -sign_sum(&q) * default_eval(&q).conj();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0), "{lhs} {rhs}");
    }

    #[test]
    fn onsite_spectral_positivity(q in queries(1..=4)) {
        prop_assume!(nearest_van_hove(&q.model, q.omega).1 > 1e-3);
        let mut o = q.clone();
        o.r.iter_mut().for_each(|x| *x = 0);
        prop_assert!(default_eval(&o).im <= 1e-12);
    }

    #[test]
    fn real_outside_the_band(q in queries(1..=4), extra in 0.0f64..3.0, below in any::<bool>()) {
        let w = q.model.bandwidth();
        let mut o = q.clone();
        o.omega = if below { -(w + extra) } else { w + extra };
        prop_assume!(extra > 1e-3 || q.dim() >= 3);
        let g = green(&o, &RegimeParams::default(), &QuadConfig::default()).unwrap();
        prop_assert_eq!(g.value.im, 0.0);
        prop_assert!(g.value.re.is_finite());
    }

    #[test]
    fn band_bottom_sign(q in queries(3..=4)) {
        let mut o = q.clone();
        o.omega = -q.model.bandwidth();
        let g = default_eval(&o);
        prop_assert!(g.im.abs() <= 1e-10);
        prop_assert!(g.re < 0.0, "{g}");
    }
}

#[test]
fn reflection_examples() {
    let a = default_eval(&iso(3, &[1, 0, 0], 0.0));
    let b = default_eval(&iso(3, &[-1, 0, 0], 0.0));
    assert_eq!(a, b);
    assert!((a.re - 0.33333333333).abs() < 1e-10);
}

#[test]
fn imaginary_part_vanishes_beyond_band_edge() {
    // the in-band value tends to a real number at the edge and stays real beyond
    for omega in [3.0, 3.5, 10.0, -3.0, -7.0] {
        let g = green(
            &iso(3, &[1, 1, 0], omega),
            &RegimeParams::default(),
            &QuadConfig::default(),
        )
        .unwrap();
        assert_eq!(g.value.im, 0.0);
    }
}

#[test]
fn onsite_real_part_vanishes_at_band_centre() {
    for d in [1, 4, 6] {
        let g = default_eval(&iso(d, &vec![0; d], 0.0));
        assert!(g.re.abs() < 1e-12, "d={d}: {g}");
        assert!(g.im < 0.0);
    }
}

#[test]
fn large_frequency_asymptote() {
    let g = default_eval(&iso(3, &[0, 0, 0], 100.0));
    assert!((100.0 * g.re - 1.0).abs() < 1e-3);
    // next term of the 1/ω expansion is (Σ Ω_k²/2)/ω³
    assert!((g.re - (0.01 + 1.5e-6)).abs() < 1e-8);
}

#[test]
fn f1_matches_independent_product() {
    let q = iso(4, &[1, 2, 2, 3], 1.0);
    let t = 3.0;
    let j = |n: u32| hankel(HankelKind::Plus, n, Complex64::new(t, 0.0)).unwrap().re;
    // α = 7, i^7 = -i
    let expected = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, t) * j(1) * j(2) * j(2) * j(3);
    let got = integrand_f1(&q, t).unwrap();
    assert!((got - expected).norm() <= 1e-13 * expected.norm());
    assert!((j(3) - bessel_j(3, t).unwrap()).abs() < 1e-14);
}

#[test]
fn f4_decays_after_a_few_oscillations() {
    let q = iso(4, &[1, 2, 2, 3], 1.0);
    let p = RegimeParams::default();
    let peak = (0..=100)
        .map(|i| integrand_f4(&q, &p, i as f64 * 0.1, false).unwrap().norm())
        .fold(0.0, f64::max);
    let tail = integrand_f4(&q, &p, 10.0, false).unwrap().norm();
    assert!(tail < 1e-3 * peak, "{tail} vs {peak}");
}

#[test]
fn f4_two_term_chain() {
    // d = 1, r = 0, ω = 0.5: Λ = 1.5 (upper ray) and Λ = -0.5 (lower ray), α = -1
    let q = GreenQuery::new(LatticeModel::isotropic(1, 1.0).unwrap(), vec![0], 0.5).unwrap();
    let p = RegimeParams::default();
    let t = p.split_t;
    let z = Complex64::new(t, 1.0);
    let hp = hankel(HankelKind::Plus, 0, z).unwrap();
    let upper = (-0.5f64).exp() * hp;
    // lower ray: H^-(T - i) = conj(H^+(T + i))
    let lower = 0.5f64.exp() * hp.conj();
    let expected = 0.5 * Complex64::from_polar(1.0, 0.5 * t) * (upper - lower);
    for scaled in [false, true] {
        let got = integrand_f4(&q, &p, 1.0, scaled).unwrap();
        assert!((got - expected).norm() <= 1e-12 * expected.norm(), "{got} {expected}");
    }
}

#[test]
fn g2_of_the_oscillatory_problem_closes_the_split() {
    // g1 + g2 is independent of T only if g2 really equals ∫_T^∞ f1
    let q = iso(4, &[1, 2, 2, 3], 1.0);
    let cfg = QuadConfig::default();
    let at = |t: f64| {
        green(
            &q,
            &RegimeParams {
                split_t: t,
                ..Default::default()
            },
            &cfg,
        )
        .unwrap()
    };
    let (a, b) = (at(2.0), at(3.0));
    assert!((a.value - b.value).norm() < 1e-12 * a.value.norm());
    assert_eq!(b.regime, Regime::Generic);
    assert!(b.evals <= 5000);
}

#[test]
fn folded_integrand_is_bounded_near_zero() {
    let q = iso(3, &[0, 0, 0], 1.0);
    let p = RegimeParams::default();
    // u = 1e-8 ↔ τ = 1e16 for d = 3; u^{-3} f4(u^{-2}) tends to a constant
    let tau = 1e16f64;
    let v = integrand_f4(&q, &p, tau, true).unwrap() * tau.powf(1.5) * 2.0;
    assert!(v.norm().is_finite() && v.norm() > 0.0 && v.norm() < 10.0);
    let g = green_at_van_hove(&q, &p, &QuadConfig::default()).unwrap();
    assert!(g.value.norm().is_finite());
}

#[test]
fn van_hove_snapping() {
    // ω within vh_tol of a van Hove frequency gives the value at that frequency
    let exact = default_eval(&iso(3, &[1, 0, 0], 1.0));
    let off = default_eval(&iso(3, &[1, 0, 0], 1.0 + 5e-13));
    assert_eq!(exact, off);
}

#[test]
fn near_van_hove_uses_scaled_path_continuously() {
    let p = RegimeParams::default();
    let cfg = QuadConfig::default();
    let q_in = iso(3, &[0, 0, 0], 1.0 - 2e-4);
    let q_near = iso(3, &[0, 0, 0], 1.0 - 5e-5);
    let a = green(&q_in, &p, &cfg).unwrap();
    let b = green(&q_near, &p, &cfg).unwrap();
    assert_eq!(a.regime, Regime::Generic);
    assert_eq!(b.regime, Regime::NearVanHove);
    // both sides of the window are close to the van Hove value
    let c = default_eval(&iso(3, &[0, 0, 0], 1.0));
    assert!((a.value - c).norm() < 0.05 && (b.value - c).norm() < 0.05);
}
